#include "botnet/population.hpp"

#include <algorithm>
#include <stdexcept>

namespace botsim {

const char* to_string(DeviceState s) {
  switch (s) {
    case DeviceState::Clean: return "clean";
    case DeviceState::Scanned: return "scanned";
    case DeviceState::Compromised: return "compromised";
    case DeviceState::Infected: return "infected";
    case DeviceState::Rebooting: return "rebooting";
    case DeviceState::Crashed: return "crashed";
  }
  return "unknown";
}

void DeviceSet::reset(std::size_t universe) {
  items_.clear();
  pos_.assign(universe, -1);
}

void DeviceSet::insert(DeviceIndex d) {
  if (pos_[d] >= 0) return;
  pos_[d] = static_cast<std::int32_t>(items_.size());
  items_.push_back(d);
}

void DeviceSet::erase(DeviceIndex d) {
  std::int32_t at = pos_[d];
  if (at < 0) return;
  DeviceIndex last = items_.back();
  items_[at] = last;
  pos_[last] = at;
  items_.pop_back();
  pos_[d] = -1;
}

DevicePopulation::DevicePopulation(std::vector<DeviceProfile> profiles,
                                   std::vector<MalwareSpec> malware)
    : profiles_(std::move(profiles)), malware_(std::move(malware)) {
  if (malware_.size() >= kNoMalware) {
    throw std::invalid_argument("too many malware families");
  }
  runtime_.resize(profiles_.size());
  candidates_.resize(malware_.size());
  bots_.resize(malware_.size());
  for (std::size_t m = 0; m < malware_.size(); ++m) {
    candidates_[m].reset(profiles_.size());
    bots_[m].reset(profiles_.size());
  }
  for (DeviceIndex d = 0; d < profiles_.size(); ++d) {
    profiles_[d].factory_services = profiles_[d].services;
    refresh_membership(d);
  }
}

std::uint8_t DevicePopulation::malware_index(const std::string& name) const {
  for (std::size_t m = 0; m < malware_.size(); ++m) {
    if (malware_[m].name == name) return static_cast<std::uint8_t>(m);
  }
  throw std::invalid_argument("unknown malware: " + name);
}

bool DevicePopulation::discoverable_by(DeviceIndex d, std::uint8_t m) const {
  const DeviceRuntime& rt = runtime_[d];
  if (rt.pipeline_busy) return false;
  if ((profiles_[d].services & malware_[m].entry_mask) == 0) return false;
  if (rt.state == DeviceState::Clean) return true;
  // A resident that left the entry service open can be scanned out and,
  // with an eviction path, taken over.
  return rt.state == DeviceState::Infected && rt.resident != m;
}

void DevicePopulation::refresh_membership(DeviceIndex d) {
  for (std::size_t m = 0; m < malware_.size(); ++m) {
    auto idx = static_cast<std::uint8_t>(m);
    if (discoverable_by(d, idx)) {
      candidates_[m].insert(d);
    } else {
      candidates_[m].erase(d);
    }
    if (runtime_[d].state == DeviceState::Infected &&
        runtime_[d].resident == idx) {
      bots_[m].insert(d);
    } else {
      bots_[m].erase(d);
    }
  }
}

namespace {

bool legal_transition(DeviceState from, DeviceState to) {
  switch (from) {
    case DeviceState::Clean:
      return to == DeviceState::Scanned || to == DeviceState::Crashed ||
             to == DeviceState::Rebooting;
    case DeviceState::Scanned:
      return to == DeviceState::Compromised || to == DeviceState::Clean ||
             to == DeviceState::Crashed || to == DeviceState::Rebooting;
    case DeviceState::Compromised:
      return to == DeviceState::Infected || to == DeviceState::Clean ||
             to == DeviceState::Rebooting;
    case DeviceState::Infected:
      return to == DeviceState::Infected || to == DeviceState::Rebooting;
    case DeviceState::Rebooting:
      return to == DeviceState::Clean || to == DeviceState::Infected;
    case DeviceState::Crashed:
      return to == DeviceState::Rebooting;
  }
  return false;
}

bool offline(DeviceState s) {
  return s == DeviceState::Rebooting || s == DeviceState::Crashed;
}

}  // namespace

void DevicePopulation::transition(SimTime at, DeviceIndex d, DeviceState to,
                                  std::uint8_t resident_after) {
  DeviceRuntime& rt = runtime_[d];
  const DeviceState from = rt.state;
  if (!legal_transition(from, to)) {
    throw std::logic_error(std::string("illegal device transition ") +
                           to_string(from) + " -> " + to_string(to) +
                           " on device " + std::to_string(d));
  }
  const bool was_infected = from == DeviceState::Infected;
  const bool now_infected = to == DeviceState::Infected;
  if (was_infected != now_infected) {
    infected_total_ += now_infected ? 1 : -1;
  }
  if (offline(from) != offline(to)) offline_total_ += offline(to) ? 1 : -1;
  if (from != DeviceState::Crashed && to == DeviceState::Crashed) {
    crashed_total_++;
  }
  if (from == DeviceState::Crashed && to != DeviceState::Crashed) {
    crashed_total_--;
  }
  rt.state = to;
  rt.resident = resident_after;
  if (!now_infected) rt.mode = BotMode::Dormant;
  refresh_membership(d);
  if (observer_) observer_(TransitionEvent{at, d, from, to, resident_after});
}

void DevicePopulation::seed_infected(DeviceIndex d, std::uint8_t malware) {
  DeviceRuntime& rt = runtime_[d];
  if (rt.state != DeviceState::Clean) {
    throw std::logic_error("seed_infected on a non-clean device");
  }
  rt.state = DeviceState::Infected;
  rt.resident = malware;
  rt.mode = BotMode::Dormant;
  infected_total_++;
  if (malware_[malware].closes_entry_ports) {
    profiles_[d].services &= ~malware_[malware].entry_mask;
  }
  refresh_membership(d);
}

std::uint32_t DevicePopulation::claim_pipeline(DeviceIndex d) {
  runtime_[d].pipeline_busy = true;
  runtime_[d].pipeline_seq++;
  refresh_membership(d);
  return runtime_[d].pipeline_seq;
}

bool DevicePopulation::pipeline_owns(DeviceIndex d, std::uint32_t seq) const {
  return runtime_[d].pipeline_busy && runtime_[d].pipeline_seq == seq;
}

void DevicePopulation::mark_scanned(SimTime at, DeviceIndex d,
                                    std::uint8_t by_malware) {
  (void)by_malware;
  // Takeover attempts leave the resident's state untouched until install.
  if (runtime_[d].state == DeviceState::Clean) {
    transition(at, d, DeviceState::Scanned, kNoMalware);
  }
}

void DevicePopulation::mark_compromised(SimTime at, DeviceIndex d,
                                        std::uint8_t by_malware) {
  (void)by_malware;
  if (runtime_[d].state == DeviceState::Scanned) {
    transition(at, d, DeviceState::Compromised, kNoMalware);
  }
}

void DevicePopulation::release_pipeline(SimTime at, DeviceIndex d) {
  DeviceRuntime& rt = runtime_[d];
  rt.pipeline_busy = false;
  if (rt.state == DeviceState::Scanned ||
      rt.state == DeviceState::Compromised) {
    transition(at, d, DeviceState::Clean, kNoMalware);
  } else {
    refresh_membership(d);
  }
}

bool DevicePopulation::install(SimTime at, DeviceIndex d,
                               std::uint8_t malware) {
  DeviceRuntime& rt = runtime_[d];
  rt.pipeline_busy = false;
  const MalwareSpec& spec = malware_[malware];
  if (rt.state == DeviceState::Infected) {
    if (rt.resident == malware) {  // refresh of an existing infection
      refresh_membership(d);
      return true;
    }
    const std::string& resident_name = malware_[rt.resident].name;
    bool evicts = std::find(spec.evicts.begin(), spec.evicts.end(),
                            resident_name) != spec.evicts.end();
    if (!evicts) {
      refresh_membership(d);
      return false;  // single-resident rule: no eviction path, no install
    }
  } else if (rt.state != DeviceState::Compromised) {
    refresh_membership(d);
    return false;  // device left the pipeline (rebooted, crashed, patched)
  }
  if (spec.closes_entry_ports) {
    profiles_[d].services &= ~spec.entry_mask;
  }
  transition(at, d, DeviceState::Infected, malware);
  return true;
}

void DevicePopulation::crash(SimTime at, DeviceIndex d) {
  runtime_[d].pipeline_busy = false;
  transition(at, d, DeviceState::Crashed, kNoMalware);
}

void DevicePopulation::begin_reboot(SimTime at, DeviceIndex d) {
  DeviceRuntime& rt = runtime_[d];
  if (rt.state == DeviceState::Rebooting) return;  // already under way
  rt.pipeline_busy = false;
  rt.epoch++;
  // The resident (if any) rides through the reboot; finish_reboot decides
  // whether it survives based on its persistence.
  transition(at, d, DeviceState::Rebooting, rt.resident);
}

void DevicePopulation::finish_reboot(SimTime at, DeviceIndex d) {
  DeviceRuntime& rt = runtime_[d];
  if (rt.state != DeviceState::Rebooting) return;
  profiles_[d].services = profiles_[d].factory_services;
  if (rt.resident != kNoMalware &&
      malware_[rt.resident].persistence == Persistence::Persistent) {
    const MalwareSpec& spec = malware_[rt.resident];
    if (spec.closes_entry_ports) profiles_[d].services &= ~spec.entry_mask;
    transition(at, d, DeviceState::Infected, rt.resident);
  } else {
    transition(at, d, DeviceState::Clean, kNoMalware);
  }
}

void DevicePopulation::set_mode(DeviceIndex d, BotMode mode) {
  runtime_[d].mode = mode;
}

void DevicePopulation::change_credential(DeviceIndex d,
                                         std::uint16_t credential) {
  profiles_[d].credential = credential;
  runtime_[d].epoch++;
}

bool DevicePopulation::patch(DeviceIndex d, std::uint32_t vuln_bit) {
  if (!profiles_[d].patchable) return false;
  profiles_[d].vulns &= ~vuln_bit;
  runtime_[d].epoch++;
  return true;
}

}  // namespace botsim
