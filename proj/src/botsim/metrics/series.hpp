#pragma once

#include <map>
#include <string>
#include <vector>

#include "engine/engine.hpp"

namespace botsim {

class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::string name, std::string units)
      : name_(std::move(name)), units_(std::move(units)) {}

  // Sample times are strictly increasing; a non-increasing time is rejected.
  void record(SimTime t, double value);

  const std::string& name() const { return name_; }
  const std::string& units() const { return units_; }
  const std::vector<std::pair<SimTime, double>>& samples() const {
    return samples_;
  }
  bool empty() const { return samples_.empty(); }

  double max_value() const;
  // Earliest sample time at which the maximum is attained.
  SimTime time_of_max() const;
  double mean_value() const;
  double last_value() const;
  double value_at_or_before(SimTime t) const;
  double mean_over(SimTime from, SimTime to) const;

 private:
  std::string name_;
  std::string units_;
  std::vector<std::pair<SimTime, double>> samples_;
};

// Named series registry; export order is the sorted series name.
class MetricsHub {
 public:
  TimeSeries& series(const std::string& name, const std::string& units);
  const TimeSeries* find(const std::string& name) const;
  const std::map<std::string, TimeSeries>& all() const { return series_; }

  // One CSV per series: header "t_seconds,value,units".
  void export_csv(const std::string& directory) const;

 private:
  std::map<std::string, TimeSeries> series_;
};

std::string csv_safe_name(const std::string& name);

}  // namespace botsim
