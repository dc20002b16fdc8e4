#include "net/flow_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace botsim {

const char* to_string(VectorTag tag) {
  switch (tag) {
    case VectorTag::None: return "none";
    case VectorTag::Syn: return "syn";
    case VectorTag::Ack: return "ack";
    case VectorTag::Udp: return "udp";
    case VectorTag::Http: return "http";
    case VectorTag::GreIp: return "gre-ip";
    case VectorTag::GreEth: return "gre-eth";
    case VectorTag::Stomp: return "stomp";
    case VectorTag::DnsDirect: return "dns-direct";
    case VectorTag::WaterTorture: return "water-torture";
    case VectorTag::Reflection: return "reflection";
  }
  return "unknown";
}

bool vector_is_spoofable(VectorTag tag) {
  // GRE tunnels carry the true endpoint address; everything else can forge
  // its source.
  return tag != VectorTag::GreIp && tag != VectorTag::GreEth;
}

double SolveResult::delivered_at(NodeId dst, FlowClass cls,
                                 std::span<const Flow> flows) const {
  double total = 0.0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].dst == dst && flows[i].cls == cls && per_flow[i].routed) {
      total += per_flow[i].delivered_bps;
    }
  }
  return total;
}

SolveResult apply_flows(const Network& net, std::span<const Flow> flows,
                        const SolveOptions& opts) {
  SolveResult result;
  result.per_flow.resize(flows.size());

  // Flatten every flow's route into one link sequence buffer.
  struct FlowPlan {
    std::uint32_t first_hop = 0;
    std::uint32_t hop_count = 0;
    std::int32_t transform_hop = -1;  // applied before entering this hop
  };
  std::vector<FlowPlan> plans(flows.size());
  std::vector<LinkId> hops;
  hops.reserve(flows.size() * 4);

  for (std::size_t f = 0; f < flows.size(); ++f) {
    const Flow& flow = flows[f];
    if (!(flow.offered_bps >= 0.0)) {
      throw std::invalid_argument("apply_flows: negative offered rate");
    }
    if (flow.spoofed_src == flow.src && flow.spoofed_src != kNoNode) {
      throw std::invalid_argument(
          "apply_flows: spoofed source equals true source");
    }
    std::vector<NodeId> path = flow.forced_path.empty()
                                   ? net.route(flow.src, flow.dst)
                                   : flow.forced_path;
    if (path.empty()) continue;  // unreachable: reported as not routed
    plans[f].first_hop = static_cast<std::uint32_t>(hops.size());
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      LinkId id = net.find_link(path[i], path[i + 1]);
      if (id == kNoLink) {
        throw std::invalid_argument("apply_flows: forced path has no link");
      }
      if (flow.transform.at != kNoNode && path[i] == flow.transform.at) {
        plans[f].transform_hop =
            static_cast<std::int32_t>(hops.size() - plans[f].first_hop);
      }
      hops.push_back(id);
    }
    plans[f].hop_count =
        static_cast<std::uint32_t>(hops.size()) - plans[f].first_hop;
    result.per_flow[f].routed = true;
  }

  std::vector<double> scale(net.link_count(), 1.0);
  std::vector<double> inflow(net.link_count(), 0.0);

  auto propagate = [&](std::size_t f) {
    // Returns the delivered rate under the current scale field and
    // accumulates per-link arriving rates.
    const Flow& flow = flows[f];
    const FlowPlan& plan = plans[f];
    double rate = flow.offered_bps;
    for (std::uint32_t h = 0; h < plan.hop_count; ++h) {
      if (plan.transform_hop == static_cast<std::int32_t>(h)) {
        rate *= flow.transform.multiplier;
      }
      LinkId id = hops[plan.first_hop + h];
      inflow[id] += rate;
      rate *= scale[id];
    }
    if (plan.transform_hop == static_cast<std::int32_t>(plan.hop_count)) {
      rate *= flow.transform.multiplier;
    }
    return rate;
  };

  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    std::fill(inflow.begin(), inflow.end(), 0.0);
    for (std::size_t f = 0; f < flows.size(); ++f) {
      if (result.per_flow[f].routed) {
        result.per_flow[f].delivered_bps = propagate(f);
      }
    }
    double worst = 0.0;
    for (LinkId id = 0; id < net.link_count(); ++id) {
      double next = 1.0;
      if (inflow[id] > net.link(id).capacity_bps) {
        next = net.link(id).capacity_bps / inflow[id];
      }
      // Damp late sweeps so cross-coupled congestion cannot oscillate.
      if (sweep > 30) next = 0.5 * (next + scale[id]);
      worst = std::max(worst, std::abs(next - scale[id]));
      scale[id] = next;
    }
    if (worst <= opts.tolerance) {
      ++sweep;
      break;
    }
  }
  result.sweeps = sweep;

  result.link_utilization.assign(net.link_count(), 0.0);
  for (LinkId id = 0; id < net.link_count(); ++id) {
    result.link_utilization[id] =
        inflow[id] * scale[id] / net.link(id).capacity_bps;
  }
  return result;
}

}  // namespace botsim
