#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "net/flow_solver.hpp"

namespace botsim {

struct CredentialPair {
  std::string user;
  std::string pass;
  auto operator<=>(const CredentialPair&) const = default;
};

enum class ScansFrom : std::uint8_t { Bots, ExternalScanner, C2 };
enum class Persistence : std::uint8_t { Volatile, Persistent };
enum class C2Addressing : std::uint8_t { Hardcoded, DomainResolved };
enum class ServiceKind : std::uint8_t { Credential, Managed };

// Scenario-scoped catalog of device services. A device's open services and a
// malware's entry services are bitmasks over this list.
struct ServiceDef {
  std::string name;   // "telnet23", "tr064", ...
  std::uint16_t port; // informational
  ServiceKind kind;   // credential services are brute-forced, managed exploited
};

struct MalwareSpec {
  std::string name;
  std::vector<CredentialPair> dictionary;
  double scan_rate_pps = 0.0;  // probes per second per scanning agent
  ScansFrom scans_from = ScansFrom::Bots;
  Persistence persistence = Persistence::Volatile;
  std::vector<std::string> evicts;  // resident malware it eradicates
  bool closes_entry_ports = false;
  std::set<VectorTag> vectors;
  std::vector<std::string> exploit_ids;
  double crash_probability = 0.0;  // per failed exploit on a fragile device
  C2Addressing c2_addressing = C2Addressing::DomainResolved;
  std::vector<std::string> entry_services;

  // Resolved at scenario load.
  std::uint32_t entry_mask = 0;
  std::uint32_t exploit_mask = 0;
  std::uint64_t dictionary_mask = 0;  // over the credential catalog
};

}  // namespace botsim
