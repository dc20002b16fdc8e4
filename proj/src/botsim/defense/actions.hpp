#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "botnet/malware.hpp"
#include "engine/engine.hpp"
#include "net/flow_solver.hpp"
#include "net/network.hpp"

namespace botsim {

struct ScrubberPolicy {
  double capacity_bps = 0.0;  // 0 keeps the scrubber link's built capacity
  std::map<VectorTag, double> efficacy;  // fraction of attack traffic removed
  double default_efficacy = 0.0;
  double legit_passthrough = 1.0;

  double attack_pass_fraction(VectorTag vector) const;
  void validate() const;  // all fractions must be within [0, 1]
};

// Fraction of a flow that survives the scrubbing hop.
double scrub_multiplier(const ScrubberPolicy& policy, FlowClass cls,
                        VectorTag vector);

// BCP38 ingress filtering: a flow is dropped at its originating access
// network iff it carries a forged source from outside that network's
// assigned space. Non-spoofed traffic always passes.
bool bcp38_passes(const Network& net, NodeId true_src, NodeId spoofed_src,
                  bool origin_region_enabled);

struct DeviceSelector {
  enum class Kind : std::uint8_t { All, Crashed, InfectedBy, Region, Sample };
  Kind kind = Kind::All;
  std::string arg;        // malware name or region label
  double fraction = 1.0;  // Sample
};

struct DefenseAction {
  enum class Kind : std::uint8_t {
    EnableBcp38,
    Reboot,
    ChangeCredentials,
    Patch,
    AttachScrubber,
    AnycastRebalance,
    C2Takedown,
  };
  SimTime at = 0.0;
  Kind kind = Kind::Reboot;
  std::string region;       // EnableBcp38 ("" = every access region)
  DeviceSelector devices;   // Reboot / ChangeCredentials / Patch
  CredentialPair credential;  // ChangeCredentials
  std::string vuln;         // Patch
  std::string target;       // AttachScrubber
  std::string scrubber;     // AttachScrubber: pre-declared scrubber node
  ScrubberPolicy policy;    // AttachScrubber
  std::string zone;         // AnycastRebalance: zone domain
  std::string malware;      // C2Takedown
};

const char* to_string(DefenseAction::Kind kind);

}  // namespace botsim
