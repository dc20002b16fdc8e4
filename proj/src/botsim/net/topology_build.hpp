#pragma once

#include <string>
#include <vector>

#include "net/network.hpp"

namespace botsim {

// One access region: a tree of IoT devices behind CPE routers, aggregated by
// DSLAMs into BRAS nodes that attach to the core mesh.
struct AccessRegionSpec {
  std::string name;
  std::uint32_t devices = 0;
  std::uint32_t cpes = 0;
  std::uint32_t dslams = 0;
  std::uint32_t brases = 1;
  double device_uplink_bps = 10e6;   // also the device->CPE link capacity
  // Optional per-device uplink draws (size == devices); overrides the flat
  // value above so heterogeneous populations carry their own link rates.
  std::vector<double> device_uplinks;
  double cpe_uplink_bps = 1e9;
  double dslam_uplink_bps = 10e9;
  double bras_uplink_bps = 100e9;
  double access_latency_s = 0.001;
  bool has_resolver = true;
  double resolver_link_bps = 10e9;
};

struct ServiceNodeSpec {
  std::string name;
  NodeKind kind = NodeKind::TargetServer;
  std::string region;        // attach near this access region, "" = core
  double ingress_bps = 1e12; // capacity of the core->node link
  double latency_s = 0.005;
};

struct TopologySpec {
  std::vector<AccessRegionSpec> regions;
  std::uint32_t core_routers = 2;
  double core_link_bps = 10e12;  // incident write-ups never state these; keep
                                 // them above any preset's offered load
  double core_latency_s = 0.005;
  std::vector<ServiceNodeSpec> services;
};

// A BRAS terminates at most this many CPE sessions.
inline constexpr std::uint32_t kBrasSessionCap = 50000;

struct BuiltTopology {
  Network net;
  // Lookup tables populated during construction.
  std::vector<NodeId> devices;                  // all IotDevice ids, in order
  std::vector<std::uint32_t> device_region;     // region index per device
  std::vector<NodeId> region_resolver;          // kNoNode when absent
  std::vector<NodeId> region_bras_core;         // core router per region
  std::vector<NodeId> region_first_bras;
  NodeId first_core = kNoNode;
  std::vector<std::pair<std::string, NodeId>> service_nodes;

  NodeId service(const std::string& name) const;
  std::uint32_t region_index(const std::string& name) const;
  std::vector<std::string> region_names;
};

// Builds the access-tree-plus-core graph. Throws std::invalid_argument on a
// spec that violates the BRAS session cap or non-positive capacities.
BuiltTopology build_topology(const TopologySpec& spec);

}  // namespace botsim
