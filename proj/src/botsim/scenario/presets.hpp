#pragma once

#include <string>
#include <vector>

#include "scenario/spec.hpp"

namespace botsim {

// Committed incident scenarios. Each returns a fully validated spec with a
// fixed default seed; names form a closed set.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);

// Throws std::invalid_argument listing the available names when unknown.
ScenarioSpec preset(const std::string& name);

}  // namespace botsim
