#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace botsim {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;
using RegionId = std::uint16_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr LinkId kNoLink = std::numeric_limits<LinkId>::max();
inline constexpr RegionId kCoreRegion = std::numeric_limits<RegionId>::max();

enum class NodeKind : std::uint8_t {
  IotDevice,
  CpeRouter,
  Dslam,
  Bras,
  CoreRouter,
  RecursiveDns,
  AuthDnsServer,
  TargetServer,
  ScrubberPop,
  C2Host,
  ReportingServer,
  LoaderHost,
  DistributionServer,
};

const char* to_string(NodeKind kind);

struct Node {
  NodeKind kind;
  RegionId region;
  NodeId parent;  // access-tree parent; kNoNode outside the access tree
};

struct Link {
  NodeId from;
  NodeId to;
  double capacity_bps;
  double latency_s;
};

// Directed graph of typed nodes and capacity-limited links. Construction is
// two-phase: add nodes and links, then finalize() to build the adjacency
// index. Queries are read-only afterwards.
class Network {
 public:
  NodeId add_node(NodeKind kind, RegionId region, NodeId parent = kNoNode);
  LinkId add_link(NodeId from, NodeId to, double capacity_bps,
                  double latency_s);
  // Adds a link in each direction with the same capacity and latency.
  void add_duplex(NodeId a, NodeId b, double capacity_bps, double latency_s);
  void finalize();

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  const Link& link(LinkId id) const { return links_[id]; }

  LinkId find_link(NodeId from, NodeId to) const;
  // Adjusts one directed link's capacity (defense actions resize scrubber
  // ingress). Routing is hop-based, so distance caches stay valid.
  void set_link_capacity(LinkId id, double capacity_bps);
  std::span<const std::pair<NodeId, LinkId>> neighbors(NodeId from) const;

  // Deterministic shortest path by hop count from src to dst, inclusive of
  // both endpoints. Ties are broken by choosing the smallest next NodeId at
  // every hop. Empty result means the pair is unreachable.
  std::vector<NodeId> route(NodeId src, NodeId dst) const;

  // Hop distance field toward dst (memoized; grows on first use per dst).
  const std::vector<std::int32_t>& distance_field(NodeId dst) const;

  double path_latency(std::span<const NodeId> path) const;

  std::vector<NodeId> nodes_of_kind(NodeKind kind) const;

 private:
  bool finalized_ = false;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  // CSR adjacency, sorted by neighbor id within each node.
  std::vector<std::uint32_t> adj_offset_;
  std::vector<std::pair<NodeId, LinkId>> adj_;
  mutable std::unordered_map<NodeId, std::vector<std::int32_t>> dist_cache_;
};

}  // namespace botsim
