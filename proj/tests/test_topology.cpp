#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <map>
#include <set>

#include "engine/rng.hpp"
#include "net/flow_solver.hpp"
#include "net/network.hpp"
#include "net/topology_build.hpp"

using namespace botsim;

namespace {

TopologySpec small_spec() {
  TopologySpec spec;
  AccessRegionSpec reg;
  reg.name = "eu";
  reg.devices = 4;
  reg.cpes = 2;
  reg.dslams = 1;
  reg.brases = 1;
  spec.regions.push_back(reg);
  ServiceNodeSpec target;
  target.name = "victim";
  target.ingress_bps = 1e9;
  spec.services.push_back(target);
  return spec;
}

// Independent shortest-path oracle: plain BFS hop counts.
std::int32_t bfs_hops(const Network& net, NodeId src, NodeId dst) {
  std::map<NodeId, std::int32_t> dist;
  std::deque<NodeId> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    NodeId at = q.front();
    q.pop_front();
    if (at == dst) return dist[at];
    for (auto [next, link] : net.neighbors(at)) {
      if (!dist.contains(next)) {
        dist[next] = dist[at] + 1;
        q.push_back(next);
      }
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("small access tree builds the expected node set") {
  BuiltTopology topo = build_topology(small_spec());
  // 4 devices + 2 CPE + 1 DSLAM + 1 BRAS = 8 access nodes.
  std::size_t access = topo.net.nodes_of_kind(NodeKind::IotDevice).size() +
                       topo.net.nodes_of_kind(NodeKind::CpeRouter).size() +
                       topo.net.nodes_of_kind(NodeKind::Dslam).size() +
                       topo.net.nodes_of_kind(NodeKind::Bras).size();
  CHECK(access == 8);
  CHECK(topo.net.nodes_of_kind(NodeKind::CoreRouter).size() >= 1);

  NodeId victim = topo.service("victim");
  auto path = topo.net.route(topo.devices[0], victim);
  CHECK(path.size() >= 5);  // >= 4 hops
  CHECK(path.front() == topo.devices[0]);
  CHECK(path.back() == victim);
}

TEST_CASE("device route climbs CPE, DSLAM, BRAS, core in order") {
  BuiltTopology topo = build_topology(small_spec());
  auto path = topo.net.route(topo.devices[0], topo.service("victim"));
  REQUIRE(path.size() >= 6);
  CHECK(topo.net.node(path[0]).kind == NodeKind::IotDevice);
  CHECK(topo.net.node(path[1]).kind == NodeKind::CpeRouter);
  CHECK(topo.net.node(path[2]).kind == NodeKind::Dslam);
  CHECK(topo.net.node(path[3]).kind == NodeKind::Bras);
  CHECK(topo.net.node(path[4]).kind == NodeKind::CoreRouter);
}

TEST_CASE("device to its own CPE is one hop") {
  BuiltTopology topo = build_topology(small_spec());
  NodeId dev = topo.devices[0];
  NodeId cpe = topo.net.node(dev).parent;
  auto path = topo.net.route(dev, cpe);
  CHECK(path.size() == 2);
}

TEST_CASE("BRAS session cap is enforced") {
  TopologySpec spec = small_spec();
  spec.regions[0].cpes = 50001;
  spec.regions[0].devices = 50001;
  CHECK_THROWS_AS(build_topology(spec), std::invalid_argument);
  spec.regions[0].cpes = 50000;
  spec.regions[0].devices = 50000;
  CHECK_NOTHROW(build_topology(spec));
}

TEST_CASE("non-positive capacities are rejected") {
  TopologySpec spec = small_spec();
  spec.regions[0].device_uplink_bps = 0.0;
  CHECK_THROWS_AS(build_topology(spec), std::invalid_argument);
}

TEST_CASE("a thousand devices get a thousand unique ids") {
  TopologySpec spec = small_spec();
  spec.regions[0].devices = 1000;
  spec.regions[0].cpes = 100;
  spec.regions[0].dslams = 4;
  BuiltTopology topo = build_topology(spec);
  CHECK(topo.devices.size() == 1000);
  std::set<NodeId> unique(topo.devices.begin(), topo.devices.end());
  CHECK(unique.size() == 1000);
  for (NodeId d : topo.devices) {
    CHECK(topo.net.node(d).kind == NodeKind::IotDevice);
    CHECK(topo.net.node(d).parent != kNoNode);
  }
}

TEST_CASE("routes match a BFS oracle on randomized topologies") {
  RngStream rng(4242, "topo-fuzz");
  for (int trial = 0; trial < 8; ++trial) {
    TopologySpec spec;
    for (int r = 0; r < 2; ++r) {
      AccessRegionSpec reg;
      reg.name = "r" + std::to_string(r);
      reg.devices = 2 + static_cast<std::uint32_t>(rng.below(5));
      reg.cpes = 1 + static_cast<std::uint32_t>(rng.below(3));
      reg.dslams = 1 + static_cast<std::uint32_t>(rng.below(2));
      spec.regions.push_back(reg);
    }
    spec.core_routers = 2 + static_cast<std::uint32_t>(rng.below(3));
    ServiceNodeSpec target;
    target.name = "t";
    spec.services.push_back(target);
    BuiltTopology topo = build_topology(spec);

    const std::size_t n = topo.net.node_count();
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = 0; b < n; ++b) {
        auto path = topo.net.route(a, b);
        std::int32_t want = bfs_hops(topo.net, a, b);
        if (want < 0) {
          CHECK(path.empty());
          continue;
        }
        REQUIRE_FALSE(path.empty());
        CHECK(static_cast<std::int32_t>(path.size()) - 1 == want);
        // Loop-free and link-connected.
        std::set<NodeId> seen(path.begin(), path.end());
        CHECK(seen.size() == path.size());
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          CHECK(topo.net.find_link(path[i], path[i + 1]) != kNoLink);
        }
      }
    }
  }
}

TEST_CASE("single flow below capacity passes untouched") {
  Network net;
  NodeId a = net.add_node(NodeKind::CoreRouter, kCoreRegion);
  NodeId b = net.add_node(NodeKind::TargetServer, kCoreRegion);
  net.add_duplex(a, b, 1e9, 0.001);
  net.finalize();

  Flow flow{a, b, 0.5e9, FlowClass::Attack, VectorTag::Udp};
  auto result = apply_flows(net, {&flow, 1});
  CHECK(result.per_flow[0].routed);
  CHECK(result.per_flow[0].delivered_bps == doctest::Approx(0.5e9));
  CHECK(result.link_utilization[net.find_link(a, b)] ==
        doctest::Approx(0.5));
}

TEST_CASE("congested link shares capacity proportionally") {
  Network net;
  NodeId a = net.add_node(NodeKind::CoreRouter, kCoreRegion);
  NodeId b = net.add_node(NodeKind::TargetServer, kCoreRegion);
  net.add_duplex(a, b, 1e9, 0.001);
  net.finalize();

  std::vector<Flow> flows{
      {a, b, 2.0e9, FlowClass::Attack, VectorTag::Syn},
      {a, b, 0.1e9, FlowClass::Legitimate, VectorTag::None},
  };
  auto result = apply_flows(net, flows);
  // Proportional share: 0.1 * 1/2.1 Gbps for the legitimate flow.
  CHECK(result.per_flow[1].delivered_bps ==
        doctest::Approx(0.1e9 / 2.1).epsilon(1e-9));
  CHECK(result.per_flow[0].delivered_bps ==
        doctest::Approx(2.0e9 / 2.1).epsilon(1e-9));
  CHECK(result.link_utilization[net.find_link(a, b)] ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("24000 bot flows aggregate to 623 Gbps at an uncapped ingress") {
  TopologySpec spec = small_spec();
  spec.regions[0].devices = 24000;
  spec.regions[0].cpes = 3000;
  spec.regions[0].dslams = 100;
  spec.regions[0].brases = 2;
  spec.regions[0].device_uplink_bps = 50e6;
  spec.regions[0].dslam_uplink_bps = 1e12;
  spec.regions[0].cpe_uplink_bps = 1e12;
  spec.regions[0].bras_uplink_bps = 1e15;
  spec.services[0].ingress_bps = 1e15;
  spec.core_link_bps = 1e15;
  BuiltTopology topo = build_topology(spec);
  NodeId victim = topo.service("victim");

  std::vector<Flow> flows;
  flows.reserve(24000);
  for (NodeId dev : topo.devices) {
    flows.push_back({dev, victim, 25.96e6, FlowClass::Attack, VectorTag::GreIp});
  }
  auto result = apply_flows(topo.net, flows);
  double total = result.delivered_at(victim, FlowClass::Attack, flows);
  CHECK(total == doctest::Approx(623.04e9).epsilon(1e-6));
}

TEST_CASE("delivered rate never increases along a path") {
  // Chain with a narrow middle link; conservation plus link safety.
  Network net;
  NodeId a = net.add_node(NodeKind::Bras, 0);
  NodeId m = net.add_node(NodeKind::CoreRouter, kCoreRegion);
  NodeId b = net.add_node(NodeKind::TargetServer, kCoreRegion);
  net.add_duplex(a, m, 5e9, 0.001);
  net.add_duplex(m, b, 1e9, 0.001);
  net.finalize();

  std::vector<Flow> flows{
      {a, b, 3.0e9, FlowClass::Attack, VectorTag::Udp},
      {a, b, 1.0e9, FlowClass::Attack, VectorTag::Udp},
  };
  auto result = apply_flows(net, flows);
  for (const auto& d : result.per_flow) CHECK(d.delivered_bps <= 3.0e9);
  // 4 Gbps offered into a 1 Gbps bottleneck: each flow keeps its share.
  CHECK(result.per_flow[0].delivered_bps == doctest::Approx(0.75e9));
  CHECK(result.per_flow[1].delivered_bps == doctest::Approx(0.25e9));
  for (double u : result.link_utilization) CHECK(u <= 1.0 + 1e-9);
}

TEST_CASE("random congested loads never overdrive a link") {
  RngStream rng(777, "congestion-fuzz");
  for (int trial = 0; trial < 10; ++trial) {
    TopologySpec spec = small_spec();
    spec.regions[0].devices = 6 + static_cast<std::uint32_t>(rng.below(10));
    spec.regions[0].cpes = 2;
    spec.regions[0].device_uplink_bps = rng.uniform(5e6, 40e6);
    spec.regions[0].cpe_uplink_bps = rng.uniform(10e6, 80e6);
    spec.regions[0].dslam_uplink_bps = rng.uniform(20e6, 120e6);
    spec.regions[0].bras_uplink_bps = rng.uniform(30e6, 200e6);
    spec.core_link_bps = rng.uniform(30e6, 200e6);
    spec.services[0].ingress_bps = rng.uniform(10e6, 100e6);
    BuiltTopology topo = build_topology(spec);
    NodeId victim = topo.service("victim");

    std::vector<Flow> flows;
    for (NodeId dev : topo.devices) {
      flows.push_back({dev, victim, rng.uniform(1e6, 50e6),
                       FlowClass::Attack, VectorTag::Udp});
    }
    auto result = apply_flows(topo.net, flows);
    for (double u : result.link_utilization) CHECK(u <= 1.0 + 1e-9);
    for (std::size_t f = 0; f < flows.size(); ++f) {
      CHECK(result.per_flow[f].delivered_bps <= flows[f].offered_bps + 1e-6);
    }
  }
}

TEST_CASE("apply_flows is a pure function of its inputs") {
  BuiltTopology topo = build_topology(small_spec());
  NodeId victim = topo.service("victim");
  std::vector<Flow> flows{
      {topo.devices[0], victim, 4e6, FlowClass::Attack, VectorTag::Syn},
      {topo.devices[1], victim, 9e6, FlowClass::Legitimate, VectorTag::None},
  };
  auto r1 = apply_flows(topo.net, flows);
  auto r2 = apply_flows(topo.net, flows);
  REQUIRE(r1.per_flow.size() == r2.per_flow.size());
  for (std::size_t i = 0; i < r1.per_flow.size(); ++i) {
    CHECK(r1.per_flow[i].delivered_bps == r2.per_flow[i].delivered_bps);
  }
}

TEST_CASE("unreachable flows are reported as unrouted") {
  Network net;
  NodeId a = net.add_node(NodeKind::CoreRouter, kCoreRegion);
  NodeId b = net.add_node(NodeKind::TargetServer, kCoreRegion);
  (void)b;
  net.finalize();
  Flow flow{a, b, 1e6, FlowClass::Attack, VectorTag::Udp};
  auto result = apply_flows(net, {&flow, 1});
  CHECK_FALSE(result.per_flow[0].routed);
  CHECK(result.per_flow[0].delivered_bps == 0.0);
}
