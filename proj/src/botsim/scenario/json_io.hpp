#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenario/spec.hpp"

namespace botsim {

struct ValidationError {
  std::string path;   // dotted config path, e.g. "attacks[0].vector"
  int line = 0;       // 1-based source line, 0 when unknown
  std::string message;

  std::string render() const;
};

struct ParseResult {
  std::optional<ScenarioSpec> spec;
  std::vector<ValidationError> errors;
  bool ok() const { return spec.has_value() && errors.empty(); }
};

// Parses and validates a scenario document. Every validation problem is
// collected (not fail-fast); an invalid document never yields a spec.
ParseResult parse_scenario(const std::string& text);

// Canonical serialization; parse(serialize(spec)) reproduces an equivalent
// spec. Field order and number formatting are deterministic.
std::string serialize_scenario(const ScenarioSpec& spec);

bool equivalent(const ScenarioSpec& a, const ScenarioSpec& b);

}  // namespace botsim
