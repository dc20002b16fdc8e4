#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "attack/commands.hpp"
#include "attack/traffic.hpp"
#include "defense/actions.hpp"
#include "net/topology_build.hpp"

using namespace botsim;

namespace {

// Wide-open capacities except for the per-device uplink.
BuiltTopology flood_topology(std::uint32_t devices, double uplink_bps,
                             const std::vector<std::string>& extra_services =
                                 {}) {
  TopologySpec spec;
  AccessRegionSpec reg;
  reg.name = "eu";
  reg.devices = devices;
  reg.cpes = std::max(1u, devices / 8);
  reg.dslams = std::max(1u, devices / 64);
  reg.brases = std::max(1u, devices / 20000);
  reg.device_uplink_bps = uplink_bps;
  reg.cpe_uplink_bps = 1e15;
  reg.dslam_uplink_bps = 1e15;
  reg.bras_uplink_bps = 1e16;
  spec.regions.push_back(reg);
  spec.core_link_bps = 1e16;
  ServiceNodeSpec victim;
  victim.name = "victim";
  victim.ingress_bps = 1e16;
  spec.services.push_back(victim);
  for (const std::string& name : extra_services) {
    ServiceNodeSpec svc;
    svc.name = name;
    svc.ingress_bps = 1e16;
    svc.kind = name.rfind("scrub", 0) == 0 ? NodeKind::ScrubberPop
                                           : NodeKind::TargetServer;
    spec.services.push_back(svc);
  }
  return build_topology(spec);
}

AttackCommand flood_cmd(const std::string& id, VectorTag vector, double fixed,
                        const std::string& target = "victim") {
  AttackCommand cmd;
  cmd.id = id;
  cmd.target = target;
  cmd.vector = vector;
  cmd.per_bot.kind = RateDist::Kind::Fixed;
  cmd.per_bot.a = fixed;
  cmd.duration_s = 60.0;
  return cmd;
}

}  // namespace

TEST_CASE("drawn rates are capped at the device uplink") {
  BuiltTopology topo = flood_topology(1, 10e6);
  TrafficSystem traffic(topo, 1);
  traffic.start_flood(flood_cmd("c0", VectorTag::Udp, 25e6), 0, 0);
  CHECK(traffic.emitted(0) == doctest::Approx(10e6));
  CHECK(traffic.ingress(topo.service("victim"), FlowClass::Attack) ==
        doctest::Approx(10e6));
}

TEST_CASE("concurrent commands share the uplink budget") {
  BuiltTopology topo = flood_topology(1, 10e6);
  TrafficSystem traffic(topo, 1);
  traffic.start_flood(flood_cmd("c0", VectorTag::GreIp, 7e6), 0, 0);
  traffic.start_flood(flood_cmd("c1", VectorTag::Syn, 7e6), 1, 0);
  CHECK(traffic.emitted(0) == doctest::Approx(10e6));  // never exceeds uplink
  traffic.end_command(1);
  CHECK(traffic.emitted(0) == doctest::Approx(7e6));
}

TEST_CASE("145607 bots at a fixed 7.55 Mbps aggregate to about 1.10 Tbps") {
  BuiltTopology topo = flood_topology(145607, 30e6);
  TrafficSystem traffic(topo, 7);
  AttackCommand cmd = flood_cmd("ovh", VectorTag::Ack, 7.55e6);
  for (DeviceIndex bot = 0; bot < 145607; ++bot) {
    traffic.start_flood(cmd, 0, bot);
  }
  double total = traffic.ingress(topo.service("victim"), FlowClass::Attack);
  CHECK(total == doctest::Approx(1.09933e12).epsilon(1e-4));
}

TEST_CASE("sum of uniform(1,30) draws lands on the analytic mean") {
  // Oracle: n * mean with a CLT-width tolerance.
  const int n = 145607;
  BuiltTopology topo = flood_topology(n, 50e6);
  TrafficSystem traffic(topo, 11);
  AttackCommand cmd = flood_cmd("ovh-u", VectorTag::Ack, 0);
  cmd.per_bot.kind = RateDist::Kind::Uniform;
  cmd.per_bot.a = 1e6;
  cmd.per_bot.b = 30e6;
  for (DeviceIndex bot = 0; bot < n; ++bot) traffic.start_flood(cmd, 0, bot);
  double total = traffic.ingress(topo.service("victim"), FlowClass::Attack);
  CHECK(total == doctest::Approx(n * 15.5e6).epsilon(0.01));
}

TEST_CASE("reflection multiplies and redistributes traffic at the victim") {
  BuiltTopology topo = flood_topology(1, 10e6, {"reflector0"});
  TrafficSystem traffic(topo, 3);
  AttackCommand cmd = flood_cmd("r0", VectorTag::Reflection, 1e6);
  cmd.amp_factor = 10.0;
  cmd.reflectors = {"reflector0"};
  traffic.start_flood(cmd, 0, 0);
  NodeId victim = topo.service("victim");
  CHECK(traffic.ingress(victim, FlowClass::Attack) == doctest::Approx(10e6));
  // The victim-visible source is the reflector, not the bot.
  CHECK(traffic.ingress_for_vector(victim, VectorTag::Reflection) ==
        doctest::Approx(10e6));
}

TEST_CASE("a hundred bots over ten reflectors yield an even 1.4 Gbps") {
  std::vector<std::string> reflectors;
  for (int i = 0; i < 10; ++i) reflectors.push_back("refl" + std::to_string(i));
  BuiltTopology topo = flood_topology(100, 10e6, reflectors);
  TrafficSystem traffic(topo, 5);
  AttackCommand cmd = flood_cmd("r1", VectorTag::Reflection, 0.5e6);
  cmd.amp_factor = 28.0;
  cmd.reflectors = reflectors;
  for (DeviceIndex bot = 0; bot < 100; ++bot) traffic.start_flood(cmd, 0, bot);
  NodeId victim = topo.service("victim");
  CHECK(traffic.ingress(victim, FlowClass::Attack) ==
        doctest::Approx(1.4e9).epsilon(1e-9));
}

TEST_CASE("bcp38 drops spoofed requests at their origin and spares gre") {
  BuiltTopology topo = flood_topology(10, 10e6, {"reflector0"});
  NodeId victim = topo.service("victim");

  // Run A: no filtering.
  TrafficSystem open(topo, 9);
  AttackCommand refl = flood_cmd("r", VectorTag::Reflection, 1e6);
  refl.amp_factor = 28.0;
  refl.reflectors = {"reflector0"};
  AttackCommand gre = flood_cmd("g", VectorTag::GreIp, 2e6);
  for (DeviceIndex bot = 0; bot < 10; ++bot) {
    open.start_flood(refl, 0, bot);
    open.start_flood(gre, 1, bot);
  }
  double open_reflection = open.ingress_for_vector(victim, VectorTag::Reflection);
  double open_gre = open.ingress_for_vector(victim, VectorTag::GreIp);
  CHECK(open_reflection == doctest::Approx(10 * 1e6 * 28.0));
  CHECK(open_gre == doctest::Approx(20e6));

  // Run B: ingress filtering on every access region.
  TrafficSystem filtered(topo, 9);
  for (DeviceIndex bot = 0; bot < 10; ++bot) {
    filtered.start_flood(refl, 0, bot);
    filtered.start_flood(gre, 1, bot);
  }
  filtered.enable_bcp38("");
  CHECK(filtered.ingress_for_vector(victim, VectorTag::Reflection) == 0.0);
  double filtered_gre = filtered.ingress_for_vector(victim, VectorTag::GreIp);
  CHECK(std::abs(filtered_gre - open_gre) <= 1e-9 * open_gre);
}

TEST_CASE("bcp38 predicate: in-space spoofing passes, disabled passes") {
  BuiltTopology topo = flood_topology(2, 10e6);
  NodeId a = topo.devices[0], b = topo.devices[1];
  NodeId victim = topo.service("victim");
  CHECK(bcp38_passes(topo.net, a, kNoNode, true));      // nothing forged
  CHECK(bcp38_passes(topo.net, a, victim, false));      // filter disabled
  CHECK(bcp38_passes(topo.net, a, b, true));            // same access space
  CHECK_FALSE(bcp38_passes(topo.net, a, victim, true)); // forged outsider
}

TEST_CASE("scrubbing removes attack traffic by vector and passes legit") {
  BuiltTopology topo = flood_topology(4, 100e6, {"scrub0"});
  NodeId victim = topo.service("victim");
  NodeId scrubber = topo.service("scrub0");
  TrafficSystem traffic(topo, 13);
  traffic.add_legit_flow(topo.region_bras_core[0], victim, 1e9);
  AttackCommand udp = flood_cmd("u", VectorTag::Udp, 50e6);
  for (DeviceIndex bot = 0; bot < 4; ++bot) traffic.start_flood(udp, 0, bot);

  ScrubberPolicy policy;
  policy.efficacy[VectorTag::Udp] = 1.0;
  traffic.attach_scrubber(victim, scrubber, policy);
  CHECK(traffic.ingress(victim, FlowClass::Attack) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(traffic.ingress(victim, FlowClass::Legitimate) ==
        doctest::Approx(1e9));

  // Zero efficacy is the identity.
  ScrubberPolicy identity;
  traffic.attach_scrubber(victim, scrubber, identity);
  CHECK(traffic.ingress(victim, FlowClass::Attack) ==
        doctest::Approx(200e6));
}

TEST_CASE("ninety percent scrubbing leaves a tenth of the flood") {
  BuiltTopology topo = flood_topology(1000, 1e9, {"scrub0"});
  NodeId victim = topo.service("victim");
  TrafficSystem traffic(topo, 17);
  AttackCommand cmd = flood_cmd("k", VectorTag::GreIp, 623e6);
  for (DeviceIndex bot = 0; bot < 1000; ++bot) traffic.start_flood(cmd, 0, bot);
  ScrubberPolicy policy;
  policy.default_efficacy = 0.9;
  traffic.attach_scrubber(victim, topo.service("scrub0"), policy);
  CHECK(traffic.ingress(victim, FlowClass::Attack) ==
        doctest::Approx(62.3e9).epsilon(0.01));
}

TEST_CASE("scrubber policy validation rejects out-of-range fractions") {
  ScrubberPolicy bad;
  bad.efficacy[VectorTag::Udp] = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ScrubberPolicy bad2;
  bad2.legit_passthrough = -0.25;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("torture prefixes are stable, well formed and collision free") {
  std::set<std::string> seen;
  for (int seq = 0; seq < 600; ++seq) {
    std::string p = torture_prefix(7, "cmd", 3, seq);
    CHECK(p.size() == 12);
    for (char c : p) CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')));
    seen.insert(p);
  }
  CHECK(seen.size() == 600);
  CHECK(torture_prefix(7, "cmd", 3, 5) == torture_prefix(7, "cmd", 3, 5));
  CHECK(torture_prefix(7, "cmd", 3, 5) != torture_prefix(7, "cmd", 4, 5));
}

TEST_CASE("rate distributions validate their support") {
  RateDist bad;
  bad.kind = RateDist::Kind::Fixed;
  bad.a = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RateDist bad2;
  bad2.kind = RateDist::Kind::Uniform;
  bad2.a = 5.0;
  bad2.b = 1.0;
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
  RateDist ok;
  ok.kind = RateDist::Kind::Uniform;
  ok.a = 1e6;
  ok.b = 30e6;
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.mean() == doctest::Approx(15.5e6));
}

TEST_CASE("ending a command removes its flows and restores budgets") {
  BuiltTopology topo = flood_topology(5, 10e6);
  TrafficSystem traffic(topo, 19);
  AttackCommand cmd = flood_cmd("c", VectorTag::Http, 4e6);
  for (DeviceIndex bot = 0; bot < 5; ++bot) traffic.start_flood(cmd, 0, bot);
  NodeId victim = topo.service("victim");
  CHECK(traffic.ingress(victim, FlowClass::Attack) == doctest::Approx(20e6));
  traffic.end_command(0);
  CHECK(traffic.ingress(victim, FlowClass::Attack) == doctest::Approx(0.0));
  CHECK(traffic.emitted(0) == doctest::Approx(0.0));
  CHECK(traffic.active_flow_count() == 0);
}
