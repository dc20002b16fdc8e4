#include "metrics/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace botsim {

std::optional<double> availability_sample(double offered_legit_bps,
                                          double delivered_legit_bps,
                                          double dns_fail_fraction,
                                          bool target_online) {
  if (!(offered_legit_bps > 0.0)) return std::nullopt;
  if (!target_online) return 0.0;
  double served = delivered_legit_bps / offered_legit_bps;
  if (served > 1.0) served = 1.0;
  return served * (1.0 - dns_fail_fraction);
}

SummaryReport summarize(const MetricsHub& hub) {
  SummaryReport report;
  if (const TimeSeries* attack = hub.find("attack_ingress_total_bps")) {
    report.peak_attack_ingress_bps = attack->max_value();
  }
  double avail_sum = 0.0;
  std::size_t avail_count = 0;
  for (const auto& [name, series] : hub.all()) {
    if (name.rfind("availability.", 0) != 0 || series.empty()) continue;
    avail_sum += series.mean_value();
    avail_count++;
  }
  if (avail_count > 0) {
    report.availability_defined = true;
    report.mean_availability = avail_sum / static_cast<double>(avail_count);
  }
  if (const TimeSeries* infected = hub.find("infected_total")) {
    report.peak_infected = infected->max_value();
    report.time_to_peak_infection_s = infected->time_of_max();
  }
  if (const TimeSeries* offered = hub.find("dns.offered_total_qps")) {
    const TimeSeries* base = hub.find("dns.baseline_qps");
    double baseline = base != nullptr && !base->empty() ? base->last_value()
                                                        : 0.0;
    if (baseline > 0.0) {
      report.dns_load_multiplier = offered->max_value() / baseline;
    }
  }
  return report;
}

std::string render_summary(const SummaryReport& report) {
  char buf[160];
  std::string out;
  auto line = [&](const char* key, const char* fmt, double v) {
    std::snprintf(buf, sizeof(buf), "%s: ", key);
    out += buf;
    std::snprintf(buf, sizeof(buf), fmt, v);
    out += buf;
    out += "\n";
  };
  out += "run-summary\n";
  line("peak-attack-ingress-bps", "%.10g", report.peak_attack_ingress_bps);
  if (report.availability_defined) {
    line("mean-availability", "%.10g", report.mean_availability);
  } else {
    out += "mean-availability: undefined\n";
  }
  line("peak-infected", "%.10g", report.peak_infected);
  line("time-to-peak-infection-s", "%.10g", report.time_to_peak_infection_s);
  line("dns-load-multiplier", "%.10g", report.dns_load_multiplier);
  for (const auto& [key, value] : report.annotations) {
    out += key + ": " + value + "\n";
  }
  return out;
}

void write_summary(const std::string& path, const SummaryReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << render_summary(report);
}

}  // namespace botsim
