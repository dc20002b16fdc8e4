#include "botnet/lifecycle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace botsim {

BotnetSystem::BotnetSystem(Engine& engine, DevicePopulation& population,
                           std::uint64_t master_seed, BotnetTimings timings,
                           double address_space,
                           const std::vector<ServiceDef>& services)
    : engine_(engine),
      pop_(population),
      timings_(timings),
      address_space_(address_space),
      services_(services) {
  if (!(address_space_ >= 1.0)) {
    throw std::invalid_argument("address space must be at least 1");
  }
  const std::size_t m = pop_.malware_count();
  for (std::size_t i = 0; i < m; ++i) {
    scan_rng_.emplace_back(master_seed, "scan:" + pop_.malware(i).name);
    crash_rng_.emplace_back(master_seed, "crash:" + pop_.malware(i).name);
  }
  probe_accum_.assign(m, 0.0);
  external_.resize(m);
  has_external_.assign(m, false);
  c2_dead_.assign(m, 0);
  discoveries_.assign(m, 0);
  installs_.assign(m, 0);
}

void BotnetSystem::set_external_scanner(std::uint8_t malware,
                                        ExternalScannerSetup setup) {
  external_[malware] = setup;
  has_external_[malware] = true;
}

void BotnetSystem::seed_infected(std::uint8_t malware,
                                 const std::vector<DeviceIndex>& devices) {
  for (DeviceIndex d : devices) pop_.seed_infected(d, malware);
}

void BotnetSystem::start() {
  for (std::size_t m = 0; m < pop_.malware_count(); ++m) {
    if (pop_.malware(m).scan_rate_pps <= 0.0) continue;
    auto idx = static_cast<std::uint8_t>(m);
    engine_.schedule(timings_.scan_tick_s, EventKind::ScanTick,
                     [this, idx] { scan_tick(idx); });
  }
}

double BotnetSystem::scanning_agents(std::uint8_t malware) const {
  const MalwareSpec& spec = pop_.malware(malware);
  switch (spec.scans_from) {
    case ScansFrom::Bots:
      return static_cast<double>(pop_.bots(malware).size());
    case ScansFrom::ExternalScanner: {
      if (!has_external_[malware]) return 0.0;
      const auto& ext = external_[malware];
      const double now = engine_.now();
      return (now >= ext.active_from_s && now < ext.active_until_s)
                 ? static_cast<double>(ext.units)
                 : 0.0;
    }
    case ScansFrom::C2:
      return c2_dead_[malware] ? 0.0 : 1.0;
  }
  return 0.0;
}

void BotnetSystem::scan_tick(std::uint8_t malware) {
  const MalwareSpec& spec = pop_.malware(malware);
  probe_accum_[malware] +=
      spec.scan_rate_pps * scanning_agents(malware) * timings_.scan_tick_s;
  auto probes = static_cast<std::int64_t>(probe_accum_[malware]);
  probe_accum_[malware] -= static_cast<double>(probes);

  if (probes > 0) {
    // One sweep probes distinct addresses, so each discoverable device is
    // hit with probability probes / address-space; the hit count over the
    // candidate set is binomial and victims are drawn without replacement.
    const auto candidates =
        static_cast<std::int64_t>(pop_.candidates(malware).size());
    if (candidates > 0) {
      const double p =
          std::min(1.0, static_cast<double>(probes) / address_space_);
      std::int64_t hits = scan_rng_[malware].binomial(candidates, p);
      for (std::int64_t h = 0; h < hits; ++h) {
        const auto& pool = pop_.candidates(malware);
        if (pool.size() == 0) break;
        DeviceIndex victim =
            pool.at(static_cast<std::size_t>(scan_rng_[malware].below(pool.size())));
        start_pipeline(malware, victim);
      }
    }
  }
  engine_.schedule(engine_.now() + timings_.scan_tick_s, EventKind::ScanTick,
                   [this, malware] { scan_tick(malware); });
}

void BotnetSystem::start_pipeline(std::uint8_t malware, DeviceIndex d) {
  const MalwareSpec& spec = pop_.malware(malware);
  const DeviceProfile& profile = pop_.profile(d);
  const std::uint32_t match = profile.services & spec.entry_mask;
  if (match == 0) return;
  const auto service =
      static_cast<std::size_t>(std::countr_zero(match));  // lowest open entry
  const bool exploit = services_[service].kind == ServiceKind::Managed;
  if (exploit && pop_.runtime(d).state == DeviceState::Infected) {
    return;  // exploit attempts only apply to clean or scanned devices
  }
  discoveries_[malware]++;
  const std::uint32_t seq = pop_.claim_pipeline(d);
  const std::uint32_t epoch = pop_.epoch(d);
  pop_.mark_scanned(engine_.now(), d, malware);
  const double delay =
      exploit ? timings_.exploit_delay_s : timings_.brute_delay_s;
  engine_.schedule(engine_.now() + delay, EventKind::PipelineStep,
                   [this, malware, d, seq, epoch, exploit] {
                     if (exploit) {
                       exploit_step(malware, d, seq, epoch);
                     } else {
                       brute_step(malware, d, seq, epoch);
                     }
                   });
}

bool BotnetSystem::pipeline_live(DeviceIndex d, std::uint32_t seq,
                                 std::uint32_t epoch) {
  if (!pop_.pipeline_owns(d, seq)) return false;  // superseded or torn down
  if (pop_.epoch(d) != epoch) {
    // Hygiene action landed mid-pipeline; the stale attempt folds.
    pop_.release_pipeline(engine_.now(), d);
    return false;
  }
  return true;
}

void BotnetSystem::brute_step(std::uint8_t malware, DeviceIndex d,
                              std::uint32_t seq, std::uint32_t epoch) {
  if (!pipeline_live(d, seq, epoch)) return;
  const MalwareSpec& spec = pop_.malware(malware);
  const std::uint16_t cred = pop_.profile(d).credential;
  const bool hit = (spec.dictionary_mask >> cred) & 1ULL;
  if (!hit) {
    brute_failures_++;
    pop_.release_pipeline(engine_.now(), d);
    return;
  }
  pop_.mark_compromised(engine_.now(), d, malware);
  engine_.schedule(engine_.now() + timings_.report_latency_s,
                   EventKind::PipelineStep, [this, malware, d, seq, epoch] {
                     report_step(malware, d, seq, epoch);
                   });
}

void BotnetSystem::exploit_step(std::uint8_t malware, DeviceIndex d,
                                std::uint32_t seq, std::uint32_t epoch) {
  if (!pipeline_live(d, seq, epoch)) return;
  const MalwareSpec& spec = pop_.malware(malware);
  if ((pop_.profile(d).vulns & spec.exploit_mask) != 0) {
    pop_.mark_compromised(engine_.now(), d, malware);
    engine_.schedule(engine_.now() + timings_.report_latency_s,
                     EventKind::PipelineStep, [this, malware, d, seq, epoch] {
                       report_step(malware, d, seq, epoch);
                     });
    return;
  }
  // Not vulnerable: malformed exploit traffic can crash fragile firmware.
  if (spec.crash_probability > 0.0 &&
      crash_rng_[malware].bernoulli(spec.crash_probability)) {
    pop_.crash(engine_.now(), d);
    return;
  }
  pop_.release_pipeline(engine_.now(), d);
}

void BotnetSystem::report_step(std::uint8_t malware, DeviceIndex d,
                               std::uint32_t seq, std::uint32_t epoch) {
  if (!pipeline_live(d, seq, epoch)) return;
  // Duplicate reports for a device collapse to the latest record.
  reports_[d] =
      ReportingRecord{pop_.profile(d).credential, engine_.now(), epoch};
  const double download_s =
      timings_.payload_bits / pop_.profile(d).uplink_bps +
      timings_.report_latency_s;
  engine_.schedule(engine_.now() + download_s, EventKind::PipelineStep,
                   [this, malware, d, seq, epoch] {
                     load_step(malware, d, seq, epoch);
                   });
}

void BotnetSystem::load_step(std::uint8_t malware, DeviceIndex d,
                             std::uint32_t seq, std::uint32_t epoch) {
  if (!pipeline_live(d, seq, epoch)) return;
  auto record = reports_.find(d);
  if (record == reports_.end() || record->second.epoch != epoch) {
    pop_.release_pipeline(engine_.now(), d);  // stale record
    return;
  }
  const DeviceRuntime before = pop_.runtime(d);
  if (pop_.install(engine_.now(), d, malware)) {
    installs_[malware]++;
    if (before.state == DeviceState::Infected) {
      evictions_++;
      if (before.mode == BotMode::Attacking && interrupt_) interrupt_(d);
      pop_.set_mode(d, BotMode::Dormant);
    }
  } else {
    blocked_installs_++;
  }
}

std::vector<DeviceIndex> BotnetSystem::broadcast(std::uint8_t malware,
                                                 double fraction,
                                                 const BotFilter& filter) {
  std::vector<DeviceIndex> tasked;
  if (c2_dead_[malware]) return tasked;
  std::vector<DeviceIndex> eligible;
  for (DeviceIndex d : pop_.bots(malware).items()) {
    if (pop_.runtime(d).mode == BotMode::Dormant && (!filter || filter(d))) {
      eligible.push_back(d);
    }
  }
  std::size_t want = eligible.size();
  if (fraction < 1.0) {
    want = static_cast<std::size_t>(fraction * static_cast<double>(want));
  }
  tasked.reserve(want);
  for (std::size_t i = 0; i < want; ++i) {
    pop_.set_mode(eligible[i], BotMode::Attacking);
    tasked.push_back(eligible[i]);
  }
  return tasked;
}

void BotnetSystem::end_attack(std::uint8_t malware,
                              const std::vector<DeviceIndex>& devices) {
  for (DeviceIndex d : devices) {
    const DeviceRuntime& rt = pop_.runtime(d);
    if (rt.state == DeviceState::Infected && rt.resident == malware &&
        rt.mode == BotMode::Attacking) {
      pop_.set_mode(d, BotMode::Dormant);
    }
  }
}

void BotnetSystem::c2_takedown(std::uint8_t malware) {
  // Bots that resolve their controller by domain name ride out an IP
  // takedown; hard-coded controller addresses do not.
  if (pop_.malware(malware).c2_addressing == C2Addressing::Hardcoded) {
    c2_dead_[malware] = 1;
  }
}

void BotnetSystem::reboot_device(DeviceIndex d) {
  const DeviceRuntime& rt = pop_.runtime(d);
  if (rt.state == DeviceState::Rebooting) return;
  if (rt.state == DeviceState::Infected && rt.mode == BotMode::Attacking &&
      interrupt_) {
    interrupt_(d);
  }
  pop_.begin_reboot(engine_.now(), d);
  engine_.schedule(engine_.now() + timings_.reboot_delay_s,
                   EventKind::RebootComplete,
                   [this, d] { pop_.finish_reboot(engine_.now(), d); });
}

void BotnetSystem::change_credential(DeviceIndex d, std::uint16_t credential) {
  pop_.change_credential(d, credential);
}

bool BotnetSystem::patch_device(DeviceIndex d, std::uint32_t vuln_bit) {
  return pop_.patch(d, vuln_bit);
}

std::uint64_t BotnetSystem::discoveries(std::uint8_t malware) const {
  return discoveries_[malware];
}

std::uint64_t BotnetSystem::installs(std::uint8_t malware) const {
  return installs_[malware];
}

}  // namespace botsim
