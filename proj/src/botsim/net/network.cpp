#include "net/network.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace botsim {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::IotDevice: return "iot-device";
    case NodeKind::CpeRouter: return "cpe-router";
    case NodeKind::Dslam: return "dslam";
    case NodeKind::Bras: return "bras";
    case NodeKind::CoreRouter: return "core-router";
    case NodeKind::RecursiveDns: return "recursive-dns";
    case NodeKind::AuthDnsServer: return "auth-dns-server";
    case NodeKind::TargetServer: return "target-server";
    case NodeKind::ScrubberPop: return "scrubber-pop";
    case NodeKind::C2Host: return "c2-host";
    case NodeKind::ReportingServer: return "reporting-server";
    case NodeKind::LoaderHost: return "loader-host";
    case NodeKind::DistributionServer: return "distribution-server";
  }
  return "unknown";
}

NodeId Network::add_node(NodeKind kind, RegionId region, NodeId parent) {
  if (finalized_) throw std::logic_error("add_node after finalize");
  nodes_.push_back(Node{kind, region, parent});
  return static_cast<NodeId>(nodes_.size() - 1);
}

LinkId Network::add_link(NodeId from, NodeId to, double capacity_bps,
                         double latency_s) {
  if (finalized_) throw std::logic_error("add_link after finalize");
  if (from >= nodes_.size() || to >= nodes_.size()) {
    throw std::invalid_argument("add_link: unknown endpoint");
  }
  if (!(capacity_bps > 0.0)) {
    throw std::invalid_argument("add_link: capacity must be positive");
  }
  if (!(latency_s >= 0.0)) {
    throw std::invalid_argument("add_link: negative latency");
  }
  links_.push_back(Link{from, to, capacity_bps, latency_s});
  return static_cast<LinkId>(links_.size() - 1);
}

void Network::add_duplex(NodeId a, NodeId b, double capacity_bps,
                         double latency_s) {
  add_link(a, b, capacity_bps, latency_s);
  add_link(b, a, capacity_bps, latency_s);
}

void Network::finalize() {
  if (finalized_) return;
  adj_offset_.assign(nodes_.size() + 1, 0);
  for (const Link& l : links_) adj_offset_[l.from + 1]++;
  for (std::size_t i = 1; i < adj_offset_.size(); ++i) {
    adj_offset_[i] += adj_offset_[i - 1];
  }
  adj_.resize(links_.size());
  std::vector<std::uint32_t> cursor(adj_offset_.begin(),
                                    adj_offset_.end() - 1);
  for (LinkId id = 0; id < links_.size(); ++id) {
    adj_[cursor[links_[id].from]++] = {links_[id].to, id};
  }
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    std::sort(adj_.begin() + adj_offset_[n], adj_.begin() + adj_offset_[n + 1]);
  }
  finalized_ = true;
}

void Network::set_link_capacity(LinkId id, double capacity_bps) {
  if (!(capacity_bps > 0.0)) {
    throw std::invalid_argument("set_link_capacity: capacity must be positive");
  }
  links_[id].capacity_bps = capacity_bps;
}

LinkId Network::find_link(NodeId from, NodeId to) const {
  auto span = neighbors(from);
  auto it = std::lower_bound(
      span.begin(), span.end(), to,
      [](const std::pair<NodeId, LinkId>& e, NodeId v) { return e.first < v; });
  if (it != span.end() && it->first == to) return it->second;
  return kNoLink;
}

std::span<const std::pair<NodeId, LinkId>> Network::neighbors(
    NodeId from) const {
  if (!finalized_) throw std::logic_error("neighbors before finalize");
  return {adj_.data() + adj_offset_[from],
          adj_.data() + adj_offset_[from + 1]};
}

const std::vector<std::int32_t>& Network::distance_field(NodeId dst) const {
  auto it = dist_cache_.find(dst);
  if (it != dist_cache_.end()) return it->second;
  std::vector<std::int32_t> dist(nodes_.size(), -1);
  std::deque<NodeId> frontier;
  dist[dst] = 0;
  frontier.push_back(dst);
  // Links are installed duplex by every builder in this project, so a BFS on
  // forward edges from dst yields hop counts toward dst.
  while (!frontier.empty()) {
    NodeId at = frontier.front();
    frontier.pop_front();
    for (auto [next, link] : neighbors(at)) {
      if (dist[next] < 0) {
        dist[next] = dist[at] + 1;
        frontier.push_back(next);
      }
    }
  }
  return dist_cache_.emplace(dst, std::move(dist)).first->second;
}

std::vector<NodeId> Network::route(NodeId src, NodeId dst) const {
  if (src >= nodes_.size() || dst >= nodes_.size()) {
    throw std::invalid_argument("route: unknown node");
  }
  if (src == dst) return {src};
  const auto& dist = distance_field(dst);
  if (dist[src] < 0) return {};
  std::vector<NodeId> path;
  path.reserve(static_cast<std::size_t>(dist[src]) + 1);
  path.push_back(src);
  NodeId at = src;
  while (at != dst) {
    NodeId chosen = kNoNode;
    for (auto [next, link] : neighbors(at)) {
      if (dist[next] == dist[at] - 1) {
        chosen = next;  // adjacency is sorted: first hit is the smallest id
        break;
      }
    }
    if (chosen == kNoNode) return {};  // disconnected mid-walk; cannot happen
    path.push_back(chosen);
    at = chosen;
  }
  return path;
}

double Network::path_latency(std::span<const NodeId> path) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    LinkId id = find_link(path[i], path[i + 1]);
    if (id != kNoLink) total += links_[id].latency_s;
  }
  return total;
}

std::vector<NodeId> Network::nodes_of_kind(NodeKind kind) const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (nodes_[n].kind == kind) out.push_back(n);
  }
  return out;
}

}  // namespace botsim
