#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "net/network.hpp"

namespace botsim {

enum class FlowClass : std::uint8_t { Legitimate, Attack };

enum class VectorTag : std::uint8_t {
  None,
  Syn,
  Ack,
  Udp,
  Http,
  GreIp,
  GreEth,
  Stomp,
  DnsDirect,
  WaterTorture,
  Reflection,
};

const char* to_string(VectorTag tag);
bool vector_is_spoofable(VectorTag tag);

// Applied when the flow passes the given node (a scrubber drops a fraction
// of attack traffic, passes legitimate traffic through).
struct HopTransform {
  NodeId at = kNoNode;
  double multiplier = 1.0;
};

struct Flow {
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  double offered_bps = 0.0;
  FlowClass cls = FlowClass::Legitimate;
  VectorTag vector = VectorTag::None;
  NodeId spoofed_src = kNoNode;  // forged source address, if any
  HopTransform transform;       // at most one mid-path transform
  // Optional explicit route (used to steer traffic through a scrubber);
  // empty means "use Network::route(src, dst)".
  std::vector<NodeId> forced_path;
};

struct FlowDelivery {
  bool routed = false;
  double delivered_bps = 0.0;
};

struct SolveResult {
  std::vector<FlowDelivery> per_flow;
  // Post-solve throughput / capacity per link, same indexing as the network.
  std::vector<double> link_utilization;
  int sweeps = 0;

  double delivered_at(NodeId dst, FlowClass cls,
                      std::span<const Flow> flows) const;
};

struct SolveOptions {
  double tolerance = 1e-12;
  int max_sweeps = 500;
};

// Proportional fluid sharing: on every link, if the sum of arriving rates
// exceeds capacity, each flow through the link is scaled by
// capacity / arriving-sum; a flow's rate into hop k+1 is its rate out of
// hop k. Repeated sweeps run the scalings to a fixed point. Pure function
// of (network, flows).
SolveResult apply_flows(const Network& net, std::span<const Flow> flows,
                        const SolveOptions& opts = {});

}  // namespace botsim
