#include "metrics/series.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace botsim {

void TimeSeries::record(SimTime t, double value) {
  if (!samples_.empty() && t <= samples_.back().first) {
    throw std::invalid_argument("series " + name_ +
                                ": non-increasing sample time");
  }
  samples_.emplace_back(t, value);
}

double TimeSeries::max_value() const {
  double best = 0.0;
  bool first = true;
  for (const auto& [t, v] : samples_) {
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

SimTime TimeSeries::time_of_max() const {
  SimTime at = 0.0;
  double best = 0.0;
  bool first = true;
  for (const auto& [t, v] : samples_) {
    if (first || v > best) {
      best = v;
      at = t;
    }
    first = false;
  }
  return at;
}

double TimeSeries::mean_value() const {
  if (samples_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [t, v] : samples_) sum += v;
  return sum / static_cast<double>(samples_.size());
}

double TimeSeries::last_value() const {
  return samples_.empty() ? 0.0 : samples_.back().second;
}

double TimeSeries::value_at_or_before(SimTime t) const {
  double value = 0.0;
  for (const auto& [at, v] : samples_) {
    if (at > t) break;
    value = v;
  }
  return value;
}

double TimeSeries::mean_over(SimTime from, SimTime to) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [at, v] : samples_) {
    if (at < from || at > to) continue;
    sum += v;
    count++;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

TimeSeries& MetricsHub::series(const std::string& name,
                               const std::string& units) {
  auto it = series_.find(name);
  if (it == series_.end()) {
    it = series_.emplace(name, TimeSeries(name, units)).first;
  }
  return it->second;
}

const TimeSeries* MetricsHub::find(const std::string& name) const {
  auto it = series_.find(name);
  return it == series_.end() ? nullptr : &it->second;
}

std::string csv_safe_name(const std::string& name) {
  std::string safe = name;
  for (char& c : safe) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      c = '_';
    }
  }
  return safe;
}

void MetricsHub::export_csv(const std::string& directory) const {
  std::filesystem::create_directories(directory);
  for (const auto& [name, series] : series_) {
    std::string path = directory + "/" + csv_safe_name(name) + ".csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << "t_seconds,value,units\n";
    char line[128];
    for (const auto& [t, v] : series.samples()) {
      std::snprintf(line, sizeof(line), "%.10g,%.10g,", t, v);
      out << line << series.units() << "\n";
    }
  }
}

}  // namespace botsim
