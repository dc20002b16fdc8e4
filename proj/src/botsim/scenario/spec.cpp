#include "scenario/spec.hpp"

#include <stdexcept>

namespace botsim {

std::uint32_t ScenarioSpec::service_mask(
    const std::vector<std::string>& names) const {
  std::uint32_t mask = 0;
  for (const std::string& name : names) {
    bool found = false;
    for (std::size_t i = 0; i < service_catalog.size(); ++i) {
      if (service_catalog[i].name == name) {
        mask |= 1u << i;
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown service: " + name);
  }
  return mask;
}

std::uint32_t ScenarioSpec::vuln_bit(const std::string& id) const {
  for (std::size_t i = 0; i < vuln_catalog.size(); ++i) {
    if (vuln_catalog[i] == id) return 1u << i;
  }
  throw std::invalid_argument("unknown vulnerability: " + id);
}

std::size_t ScenarioSpec::total_devices() const {
  std::size_t total = 0;
  for (const auto& region : topology.regions) total += region.devices;
  return total;
}

}  // namespace botsim
