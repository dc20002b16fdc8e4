#include "defense/actions.hpp"

#include <stdexcept>

namespace botsim {

double ScrubberPolicy::attack_pass_fraction(VectorTag vector) const {
  auto it = efficacy.find(vector);
  double e = it != efficacy.end() ? it->second : default_efficacy;
  return 1.0 - e;
}

void ScrubberPolicy::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (const auto& [vector, e] : efficacy) {
    if (!in_unit(e)) {
      throw std::invalid_argument("scrubber efficacy outside [0,1]");
    }
  }
  if (!in_unit(default_efficacy) || !in_unit(legit_passthrough)) {
    throw std::invalid_argument("scrubber fractions outside [0,1]");
  }
}

double scrub_multiplier(const ScrubberPolicy& policy, FlowClass cls,
                        VectorTag vector) {
  if (cls == FlowClass::Legitimate) return policy.legit_passthrough;
  return policy.attack_pass_fraction(vector);
}

bool bcp38_passes(const Network& net, NodeId true_src, NodeId spoofed_src,
                  bool origin_region_enabled) {
  if (spoofed_src == kNoNode) return true;  // nothing forged
  if (!origin_region_enabled) return true;
  // A forged address inside the originating network's own space is not
  // detectable by ingress filtering.
  return net.node(spoofed_src).region == net.node(true_src).region;
}

const char* to_string(DefenseAction::Kind kind) {
  switch (kind) {
    case DefenseAction::Kind::EnableBcp38: return "enable-bcp38";
    case DefenseAction::Kind::Reboot: return "reboot";
    case DefenseAction::Kind::ChangeCredentials: return "change-credentials";
    case DefenseAction::Kind::Patch: return "patch";
    case DefenseAction::Kind::AttachScrubber: return "attach-scrubber";
    case DefenseAction::Kind::AnycastRebalance: return "anycast-rebalance";
    case DefenseAction::Kind::C2Takedown: return "c2-takedown";
  }
  return "unknown";
}

}  // namespace botsim
