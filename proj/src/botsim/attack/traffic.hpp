#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attack/commands.hpp"
#include "botnet/population.hpp"
#include "defense/actions.hpp"
#include "net/flow_solver.hpp"
#include "net/topology_build.hpp"

namespace botsim {

// Owns the live flow set: permanent legitimate demand, per-bot flood flows,
// and reflection request/response pairs. Applies BCP38 ingress filtering and
// scrubber steering, then solves the fluid model lazily — the solution is a
// pure function of the current flow set, so it is cached until a flow or a
// defense changes.
class TrafficSystem {
 public:
  TrafficSystem(const BuiltTopology& topo, std::uint64_t master_seed);

  void add_legit_flow(NodeId src, NodeId dst, double bps);

  // Starts one bot's contribution to a flood command. The drawn rate is
  // capped so the device's total emission never exceeds its uplink.
  void start_flood(const AttackCommand& cmd, std::uint32_t cmd_index,
                   DeviceIndex bot);
  void end_command(std::uint32_t cmd_index);
  void drop_bot_flows(DeviceIndex bot);

  void enable_bcp38(const std::string& region);  // "" enables everywhere
  bool bcp38_enabled(RegionId region) const;
  void attach_scrubber(NodeId target, NodeId scrubber, ScrubberPolicy policy);

  const SolveResult& solve();
  double ingress(NodeId target, FlowClass cls);
  double ingress_for_vector(NodeId target, VectorTag vector);
  double ingress_link_utilization(NodeId target);
  double max_link_utilization();
  double emitted(DeviceIndex bot) const;
  double offered_legit(NodeId target) const;

  std::size_t active_flow_count() const { return records_.size(); }

 private:
  struct FlowRecord {
    Flow flow;
    std::int64_t cmd = -1;          // -1 for legitimate background demand
    std::int64_t bot = -1;          // device index emitting it
    double emitted_bps = 0.0;       // uplink budget charged to the bot
    // Reflection response: offered rate is amp * delivered requests.
    bool reflection_response = false;
    std::uint32_t reflector_slot = 0;
  };

  struct ReflectorAggregate {
    std::uint32_t cmd = 0;
    NodeId reflector = kNoNode;
    NodeId victim = kNoNode;
    double amp = 1.0;
  };

  void invalidate() { dirty_ = true; }
  void rebuild_and_solve();
  NodeId device_node(DeviceIndex bot) const;

  const BuiltTopology& topo_;
  std::uint64_t master_seed_;
  std::vector<FlowRecord> records_;
  std::vector<ReflectorAggregate> reflectors_;
  std::vector<double> bot_emission_;  // per device index
  std::vector<char> bcp38_;
  std::map<NodeId, std::pair<NodeId, ScrubberPolicy>> scrubbers_;
  bool dirty_ = true;
  SolveResult solution_;
  std::vector<Flow> solved_flows_;
  std::vector<std::int64_t> solved_record_;  // solver row -> record index
};

}  // namespace botsim
