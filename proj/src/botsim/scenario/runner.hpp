#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "metrics/report.hpp"
#include "metrics/series.hpp"
#include "scenario/spec.hpp"

namespace botsim {

struct RunOptions {
  std::optional<std::uint64_t> seed;   // overrides the scenario seed
  std::optional<double> until;         // overrides the horizon
  std::string out_dir;                 // empty: keep results in memory only
  enum class Format : std::uint8_t { Csv, Structured };
  Format format = Format::Csv;
};

struct RunResult {
  SummaryReport summary;
  MetricsHub metrics;
  std::uint64_t events_processed = 0;
  std::uint64_t torture_queries = 0;
  std::uint64_t torture_cache_hits = 0;
  std::uint64_t pool_arrivals = 0;
  std::uint64_t final_infected = 0;
  double wall_seconds = 0.0;
};

// Executes one scenario end to end: builds the network and population,
// schedules the attack and defense timelines, samples metrics, and writes
// CSV series plus a structured summary when an output directory is given.
RunResult run_scenario(const ScenarioSpec& spec, const RunOptions& opts = {});

}  // namespace botsim
