#include "attack/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace botsim {

TrafficSystem::TrafficSystem(const BuiltTopology& topo,
                             std::uint64_t master_seed)
    : topo_(topo), master_seed_(master_seed) {
  bot_emission_.assign(topo_.devices.size(), 0.0);
  bcp38_.assign(topo_.region_names.size(), 0);
}

NodeId TrafficSystem::device_node(DeviceIndex bot) const {
  return topo_.devices[bot];
}

void TrafficSystem::add_legit_flow(NodeId src, NodeId dst, double bps) {
  FlowRecord rec;
  rec.flow.src = src;
  rec.flow.dst = dst;
  rec.flow.offered_bps = bps;
  records_.push_back(std::move(rec));
  invalidate();
}

void TrafficSystem::start_flood(const AttackCommand& cmd,
                                std::uint32_t cmd_index, DeviceIndex bot) {
  const NodeId src = device_node(bot);
  const double uplink = topo_.net.link(topo_.net.find_link(
      src, topo_.net.node(src).parent)).capacity_bps;
  double budget = uplink - bot_emission_[bot];
  if (budget <= 0.0) return;  // uplink already saturated by another command
  double rate = cmd.per_bot.draw(master_seed_, "cmd-rate:" + cmd.id, bot);
  if (!(rate > 0.0)) {
    throw std::invalid_argument("non-positive per-bot rate draw for command " +
                                cmd.id);
  }
  rate = std::min(rate, budget);
  bot_emission_[bot] += rate;

  FlowRecord rec;
  rec.cmd = cmd_index;
  rec.bot = bot;
  rec.emitted_bps = rate;

  if (cmd.vector == VectorTag::Reflection) {
    NodeId victim = topo_.service(cmd.target);
    // Bots spread their requests evenly over the reflector set.
    std::size_t slot = bot % cmd.reflectors.size();
    NodeId reflector = topo_.service(cmd.reflectors[slot]);
    rec.flow.src = src;
    rec.flow.dst = reflector;
    rec.flow.offered_bps = rate;
    rec.flow.cls = FlowClass::Attack;
    rec.flow.vector = VectorTag::Reflection;
    rec.flow.spoofed_src = victim;
    // Make sure each (command, reflector) pair has its response aggregate.
    for (const std::string& name : cmd.reflectors) {
      NodeId r = topo_.service(name);
      bool exists = false;
      for (const auto& agg : reflectors_) {
        if (agg.cmd == cmd_index && agg.reflector == r) exists = true;
      }
      if (!exists) {
        reflectors_.push_back(
            ReflectorAggregate{cmd_index, r, victim, cmd.amp_factor});
      }
    }
  } else {
    rec.flow.src = src;
    rec.flow.dst = topo_.service(cmd.target);
    rec.flow.offered_bps = rate;
    rec.flow.cls = FlowClass::Attack;
    rec.flow.vector = cmd.vector;
  }
  records_.push_back(std::move(rec));
  invalidate();
}

void TrafficSystem::end_command(std::uint32_t cmd_index) {
  for (const FlowRecord& rec : records_) {
    if (rec.cmd == cmd_index && rec.bot >= 0) {
      bot_emission_[rec.bot] -= rec.emitted_bps;
    }
  }
  std::erase_if(records_, [&](const FlowRecord& rec) {
    return rec.cmd == static_cast<std::int64_t>(cmd_index);
  });
  std::erase_if(reflectors_, [&](const ReflectorAggregate& agg) {
    return agg.cmd == cmd_index;
  });
  invalidate();
}

void TrafficSystem::drop_bot_flows(DeviceIndex bot) {
  bool touched = false;
  for (const FlowRecord& rec : records_) {
    if (rec.bot == static_cast<std::int64_t>(bot)) {
      bot_emission_[bot] -= rec.emitted_bps;
      touched = true;
    }
  }
  if (!touched) return;
  std::erase_if(records_, [&](const FlowRecord& rec) {
    return rec.bot == static_cast<std::int64_t>(bot);
  });
  invalidate();
}

void TrafficSystem::enable_bcp38(const std::string& region) {
  if (region.empty()) {
    std::fill(bcp38_.begin(), bcp38_.end(), 1);
  } else {
    bcp38_[topo_.region_index(region)] = 1;
  }
  invalidate();
}

bool TrafficSystem::bcp38_enabled(RegionId region) const {
  return region < bcp38_.size() && bcp38_[region] != 0;
}

void TrafficSystem::attach_scrubber(NodeId target, NodeId scrubber,
                                    ScrubberPolicy policy) {
  policy.validate();
  scrubbers_[target] = {scrubber, policy};
  invalidate();
}

void TrafficSystem::rebuild_and_solve() {
  solved_flows_.clear();
  solved_record_.clear();

  auto steer = [&](Flow flow) {
    auto scrub = scrubbers_.find(flow.dst);
    if (scrub != scrubbers_.end()) {
      NodeId via = scrub->second.first;
      auto head = topo_.net.route(flow.src, via);
      auto tail = topo_.net.route(via, flow.dst);
      if (!head.empty() && !tail.empty()) {
        head.insert(head.end(), tail.begin() + 1, tail.end());
        flow.forced_path = std::move(head);
        flow.transform = HopTransform{
            via, scrub_multiplier(scrub->second.second, flow.cls, flow.vector)};
      }
    }
    return flow;
  };

  for (std::size_t i = 0; i < records_.size(); ++i) {
    const FlowRecord& rec = records_[i];
    if (rec.reflection_response) continue;  // regenerated below
    const Flow& flow = rec.flow;
    if (flow.spoofed_src != kNoNode) {
      RegionId origin = topo_.net.node(flow.src).region;
      if (!bcp38_passes(topo_.net, flow.src, flow.spoofed_src,
                        bcp38_enabled(origin))) {
        continue;  // filtered at the network ingress
      }
    }
    solved_flows_.push_back(steer(flow));
    solved_record_.push_back(static_cast<std::int64_t>(i));
  }

  // Reflection responses: each reflector emits amp times the request rate it
  // actually received, which itself depends on the solved network state.
  const std::size_t base_count = solved_flows_.size();
  for (const auto& agg : reflectors_) {
    Flow response;
    response.src = agg.reflector;
    response.dst = agg.victim;
    response.cls = FlowClass::Attack;
    response.vector = VectorTag::Reflection;
    solved_flows_.push_back(steer(response));
    solved_record_.push_back(-1);
  }

  for (int pass = 0; pass < 8; ++pass) {
    solution_ = apply_flows(topo_.net, solved_flows_);
    if (reflectors_.empty()) break;
    double worst = 0.0;
    for (std::size_t r = 0; r < reflectors_.size(); ++r) {
      const auto& agg = reflectors_[r];
      double received = 0.0;
      for (std::size_t i = 0; i < base_count; ++i) {
        const std::int64_t rec_idx = solved_record_[i];
        if (rec_idx < 0) continue;
        const FlowRecord& rec = records_[rec_idx];
        if (rec.cmd == agg.cmd && rec.flow.dst == agg.reflector &&
            solution_.per_flow[i].routed) {
          received += solution_.per_flow[i].delivered_bps;
        }
      }
      double want = agg.amp * received;
      double& offered = solved_flows_[base_count + r].offered_bps;
      worst = std::max(worst, std::abs(offered - want));
      offered = want;
    }
    if (worst <= 1e-9) break;
  }
  dirty_ = false;
}

const SolveResult& TrafficSystem::solve() {
  if (dirty_) rebuild_and_solve();
  return solution_;
}

double TrafficSystem::ingress(NodeId target, FlowClass cls) {
  solve();
  double total = 0.0;
  for (std::size_t i = 0; i < solved_flows_.size(); ++i) {
    if (solved_flows_[i].dst == target && solved_flows_[i].cls == cls &&
        solution_.per_flow[i].routed) {
      total += solution_.per_flow[i].delivered_bps;
    }
  }
  return total;
}

double TrafficSystem::ingress_for_vector(NodeId target, VectorTag vector) {
  solve();
  double total = 0.0;
  for (std::size_t i = 0; i < solved_flows_.size(); ++i) {
    if (solved_flows_[i].dst == target && solved_flows_[i].vector == vector &&
        solution_.per_flow[i].routed) {
      total += solution_.per_flow[i].delivered_bps;
    }
  }
  return total;
}

double TrafficSystem::ingress_link_utilization(NodeId target) {
  solve();
  NodeId attach = topo_.net.node(target).parent;
  LinkId link = topo_.net.find_link(attach, target);
  return link == kNoLink ? 0.0 : solution_.link_utilization[link];
}

double TrafficSystem::max_link_utilization() {
  solve();
  double worst = 0.0;
  for (double u : solution_.link_utilization) worst = std::max(worst, u);
  return worst;
}

double TrafficSystem::emitted(DeviceIndex bot) const {
  return bot_emission_[bot];
}

double TrafficSystem::offered_legit(NodeId target) const {
  double total = 0.0;
  for (const FlowRecord& rec : records_) {
    if (rec.flow.dst == target && rec.flow.cls == FlowClass::Legitimate) {
      total += rec.flow.offered_bps;
    }
  }
  return total;
}

}  // namespace botsim
