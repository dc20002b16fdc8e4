#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attack/commands.hpp"
#include "botnet/lifecycle.hpp"
#include "botnet/malware.hpp"
#include "defense/actions.hpp"
#include "dns/dns_system.hpp"
#include "net/topology_build.hpp"

namespace botsim {

struct CredentialEntry {
  CredentialPair pair;
  double weight = 1.0;
};

// Device template for one access region's population.
struct RegionDevices {
  std::vector<std::string> services;
  std::vector<CredentialEntry> credentials;
  std::vector<std::pair<std::string, double>> vulns;  // (id, fraction)
  bool patchable = true;
  // Per-device uplink draw; fixed value uses the region's topology uplink.
  std::optional<RateDist> uplink_dist;
};

struct MalwareEntry {
  MalwareSpec spec;
  std::uint32_t initial_infected = 0;
  std::string seed_region;  // "" seeds across the whole population
  std::optional<ExternalScannerSetup> external_scanner;
};

struct LegitFlowSpec {
  std::string target;
  double bps = 0.0;
  std::string from_region;  // "" sources at the core
};

struct TargetBehavior {
  std::string name;           // service node
  std::string domain;         // resolves through this zone, if any
  double overload_threshold_bps = 0.0;  // 0: never reboots under load
  double check_interval_s = 10.0;
};

struct TimelineAttack {
  AttackCommand command;
  double bot_fraction = 1.0;
  std::string bot_region;  // "" tasks bots in every region
};

struct ScenarioSpec {
  std::string name;
  std::uint64_t seed = 1;
  double horizon_s = 0.0;
  double metric_interval_s = 1.0;

  TopologySpec topology;
  std::vector<ServiceDef> service_catalog;
  std::vector<std::string> vuln_catalog;
  std::map<std::string, RegionDevices> devices;  // keyed by region name

  double address_space = 0.0;  // 0: the device population size
  BotnetTimings timings;
  std::vector<MalwareEntry> malware;

  bool has_dns = false;
  DnsConfig dns;
  std::vector<ZoneSetup> zones;

  std::vector<LegitFlowSpec> legit_flows;
  std::vector<TargetBehavior> target_behavior;
  std::vector<TimelineAttack> attacks;
  std::vector<DefenseAction> defenses;

  std::map<std::string, std::string> annotations;

  std::uint32_t service_mask(const std::vector<std::string>& names) const;
  std::uint32_t vuln_bit(const std::string& id) const;
  std::size_t total_devices() const;
};

}  // namespace botsim
