#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "botnet/malware.hpp"
#include "engine/engine.hpp"

namespace botsim {

using DeviceIndex = std::uint32_t;
inline constexpr std::uint8_t kNoMalware = 0xff;

enum class DeviceState : std::uint8_t {
  Clean,
  Scanned,
  Compromised,
  Infected,
  Rebooting,
  Crashed,
};

const char* to_string(DeviceState s);

enum class BotMode : std::uint8_t { Dormant, Attacking };

struct DeviceProfile {
  std::uint32_t services = 0;       // current open services (runtime view)
  std::uint32_t factory_services = 0;  // restored by a reboot
  std::uint32_t vulns = 0;
  std::uint16_t credential = 0;     // index into the credential catalog
  bool patchable = true;
  double uplink_bps = 10e6;
};

struct DeviceRuntime {
  DeviceState state = DeviceState::Clean;
  std::uint8_t resident = kNoMalware;
  BotMode mode = BotMode::Dormant;
  bool pipeline_busy = false;
  std::uint32_t pipeline_seq = 0;  // current pipeline's claim ticket
  std::uint32_t epoch = 0;  // bumped by reboot/patch/credential/crash events
};

// O(1) insert/erase membership set over device indices.
class DeviceSet {
 public:
  void reset(std::size_t universe);
  void insert(DeviceIndex d);
  void erase(DeviceIndex d);
  bool contains(DeviceIndex d) const { return pos_[d] >= 0; }
  std::size_t size() const { return items_.size(); }
  DeviceIndex at(std::size_t i) const { return items_[i]; }
  const std::vector<DeviceIndex>& items() const { return items_; }

 private:
  std::vector<DeviceIndex> items_;
  std::vector<std::int32_t> pos_;
};

struct TransitionEvent {
  SimTime at;
  DeviceIndex device;
  DeviceState from;
  DeviceState to;
  std::uint8_t malware;  // resident after the transition, if any
};

// Device storage plus the infection state machine. Every state change goes
// through transition(), which enforces the legal transition set and keeps
// the per-malware candidate and bot sets in sync.
class DevicePopulation {
 public:
  using Observer = std::function<void(const TransitionEvent&)>;

  DevicePopulation(std::vector<DeviceProfile> profiles,
                   std::vector<MalwareSpec> malware);

  std::size_t size() const { return profiles_.size(); }
  std::size_t malware_count() const { return malware_.size(); }
  const MalwareSpec& malware(std::uint8_t m) const { return malware_[m]; }
  std::uint8_t malware_index(const std::string& name) const;

  const DeviceProfile& profile(DeviceIndex d) const { return profiles_[d]; }
  const DeviceRuntime& runtime(DeviceIndex d) const { return runtime_[d]; }

  // Candidate pool for a malware: devices it could currently discover.
  const DeviceSet& candidates(std::uint8_t m) const { return candidates_[m]; }
  // Devices currently infected by a malware.
  const DeviceSet& bots(std::uint8_t m) const { return bots_[m]; }

  std::uint64_t infected_total() const { return infected_total_; }
  std::uint64_t offline_total() const { return offline_total_; }
  std::uint64_t crashed_total() const { return crashed_total_; }

  void set_observer(Observer obs) { observer_ = std::move(obs); }

  // Initial condition: marks a device infected before the run starts. Not a
  // runtime transition, so no observer event is emitted.
  void seed_infected(DeviceIndex d, std::uint8_t malware);

  // --- state machine entry points (called by the lifecycle layer) ---------
  void mark_scanned(SimTime at, DeviceIndex d, std::uint8_t by_malware);
  void mark_compromised(SimTime at, DeviceIndex d, std::uint8_t by_malware);
  void release_pipeline(SimTime at, DeviceIndex d);  // failed attempt
  // Final infection step: eviction check, port closing, C2 registration.
  // Returns false when a resident without an eviction path blocks it.
  bool install(SimTime at, DeviceIndex d, std::uint8_t malware);
  void crash(SimTime at, DeviceIndex d);
  void begin_reboot(SimTime at, DeviceIndex d);
  void finish_reboot(SimTime at, DeviceIndex d);
  void set_mode(DeviceIndex d, BotMode mode);

  // --- profile mutations (defense hygiene) --------------------------------
  void change_credential(DeviceIndex d, std::uint16_t credential);
  bool patch(DeviceIndex d, std::uint32_t vuln_bit);  // false if unpatchable

  std::uint32_t epoch(DeviceIndex d) const { return runtime_[d].epoch; }
  bool pipeline_busy(DeviceIndex d) const { return runtime_[d].pipeline_busy; }
  // Claims the device for an infection attempt; returns the claim ticket a
  // pipeline must present on every later step.
  std::uint32_t claim_pipeline(DeviceIndex d);
  bool pipeline_owns(DeviceIndex d, std::uint32_t seq) const;

 private:
  void transition(SimTime at, DeviceIndex d, DeviceState to,
                  std::uint8_t resident_after);
  void refresh_membership(DeviceIndex d);
  bool discoverable_by(DeviceIndex d, std::uint8_t m) const;

  std::vector<DeviceProfile> profiles_;
  std::vector<DeviceRuntime> runtime_;
  std::vector<MalwareSpec> malware_;
  std::vector<DeviceSet> candidates_;
  std::vector<DeviceSet> bots_;
  std::uint64_t infected_total_ = 0;
  std::uint64_t offline_total_ = 0;
  std::uint64_t crashed_total_ = 0;
  Observer observer_;
};

}  // namespace botsim
