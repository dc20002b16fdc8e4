#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "botnet/population.hpp"
#include "engine/engine.hpp"
#include "engine/rng.hpp"

namespace botsim {

struct BotnetTimings {
  double scan_tick_s = 1.0;
  double brute_delay_s = 5.0;    // per brute-force attempt
  double exploit_delay_s = 1.0;  // per exploit attempt
  double report_latency_s = 0.05;
  double payload_bits = 1e6;     // malware download size
  double reboot_delay_s = 60.0;
};

struct ExternalScannerSetup {
  std::uint32_t units = 1;
  double active_from_s = 0.0;
  double active_until_s = 1e18;
};

struct ReportingRecord {
  std::uint16_t credential = 0;
  SimTime reported_at = 0.0;
  std::uint32_t epoch = 0;
};

// Drives the infection machinery over the event loop: scanning sweeps,
// brute-force/exploit pipelines, the reporting-server ledger, malware
// loading, C2 tasking and the device-side defense actions.
class BotnetSystem {
 public:
  // Called when an attacking bot stops being an attacking bot outside the
  // normal end of a command (reboot, eviction, crash): the traffic layer
  // must tear its flows down.
  using InterruptHook = std::function<void(DeviceIndex)>;

  BotnetSystem(Engine& engine, DevicePopulation& population,
               std::uint64_t master_seed, BotnetTimings timings,
               double address_space, const std::vector<ServiceDef>& services);

  void set_external_scanner(std::uint8_t malware, ExternalScannerSetup setup);
  void set_interrupt_hook(InterruptHook hook) { interrupt_ = std::move(hook); }

  // Initial condition, applied before the clock starts.
  void seed_infected(std::uint8_t malware,
                     const std::vector<DeviceIndex>& devices);

  // Schedules the per-malware scan sweeps.
  void start();

  // --- C2 ------------------------------------------------------------------
  // Tasks every dormant bot of the malware that passes the filter; with a
  // fraction below one, tasks that share of the eligible set. Returns the
  // tasked set.
  using BotFilter = std::function<bool(DeviceIndex)>;
  std::vector<DeviceIndex> broadcast(std::uint8_t malware,
                                     double fraction = 1.0,
                                     const BotFilter& filter = {});
  void end_attack(std::uint8_t malware,
                  const std::vector<DeviceIndex>& devices);
  void c2_takedown(std::uint8_t malware);
  bool c2_alive(std::uint8_t malware) const { return !c2_dead_[malware]; }

  // --- defenses --------------------------------------------------------------
  void reboot_device(DeviceIndex d);
  void change_credential(DeviceIndex d, std::uint16_t credential);
  bool patch_device(DeviceIndex d, std::uint32_t vuln_bit);

  // --- introspection ---------------------------------------------------------
  const DevicePopulation& population() const { return pop_; }
  std::uint64_t discoveries(std::uint8_t malware) const;
  std::uint64_t installs(std::uint8_t malware) const;
  std::uint64_t evictions() const { return evictions_; }
  std::uint64_t blocked_installs() const { return blocked_installs_; }
  std::uint64_t brute_failures() const { return brute_failures_; }
  std::size_t report_count() const { return reports_.size(); }
  const std::map<DeviceIndex, ReportingRecord>& reports() const {
    return reports_;
  }
  double scanning_agents(std::uint8_t malware) const;

 private:
  void scan_tick(std::uint8_t malware);
  void start_pipeline(std::uint8_t malware, DeviceIndex d);
  void brute_step(std::uint8_t malware, DeviceIndex d, std::uint32_t seq,
                  std::uint32_t epoch);
  void exploit_step(std::uint8_t malware, DeviceIndex d, std::uint32_t seq,
                    std::uint32_t epoch);
  void report_step(std::uint8_t malware, DeviceIndex d, std::uint32_t seq,
                   std::uint32_t epoch);
  void load_step(std::uint8_t malware, DeviceIndex d, std::uint32_t seq,
                 std::uint32_t epoch);
  bool pipeline_live(DeviceIndex d, std::uint32_t seq, std::uint32_t epoch);

  Engine& engine_;
  DevicePopulation& pop_;
  BotnetTimings timings_;
  double address_space_;
  const std::vector<ServiceDef>& services_;
  std::vector<RngStream> scan_rng_;
  std::vector<RngStream> crash_rng_;
  std::vector<double> probe_accum_;
  std::vector<ExternalScannerSetup> external_;
  std::vector<bool> has_external_;
  std::vector<char> c2_dead_;
  std::vector<std::uint64_t> discoveries_;
  std::vector<std::uint64_t> installs_;
  std::uint64_t evictions_ = 0;
  std::uint64_t blocked_installs_ = 0;
  std::uint64_t brute_failures_ = 0;
  std::map<DeviceIndex, ReportingRecord> reports_;
  InterruptHook interrupt_;
};

}  // namespace botsim
