#pragma once

#include <map>
#include <optional>
#include <string>

#include "metrics/series.hpp"

namespace botsim {

// Instantaneous availability of a target: delivered legitimate rate over
// offered legitimate rate, degraded by the DNS lookup failure fraction and
// zeroed while the target is offline. Undefined (nullopt) with no offered
// legitimate load — distinct from zero.
std::optional<double> availability_sample(double offered_legit_bps,
                                          double delivered_legit_bps,
                                          double dns_fail_fraction,
                                          bool target_online);

struct SummaryReport {
  double peak_attack_ingress_bps = 0.0;
  bool availability_defined = false;
  double mean_availability = 1.0;
  double peak_infected = 0.0;
  double time_to_peak_infection_s = 0.0;
  double dns_load_multiplier = 1.0;
  std::map<std::string, std::string> annotations;
};

// Deterministic aggregation of the recorded series; never reads live
// simulation state. Series naming contract:
//   attack_ingress_total_bps   summed attack delivery over all targets
//   availability.<target>      defined samples only
//   infected_total             devices currently infected
//   dns.offered_total_qps      pool-offered DNS load
//   dns.baseline_qps           configured legitimate baseline (constant)
SummaryReport summarize(const MetricsHub& hub);

std::string render_summary(const SummaryReport& report);
void write_summary(const std::string& path, const SummaryReport& report);

}  // namespace botsim
