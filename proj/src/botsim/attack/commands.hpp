#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "engine/engine.hpp"
#include "net/flow_solver.hpp"

namespace botsim {

struct RateDist {
  enum class Kind : std::uint8_t { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  double a = 0.0;  // fixed value, or lower bound
  double b = 0.0;  // upper bound for uniform

  // Order-independent per-entity draw.
  double draw(std::uint64_t master_seed, const std::string& label,
              std::uint64_t key) const;
  double mean() const;
  double upper() const;
  void validate() const;  // throws on empty/negative support
};

struct AttackCommand {
  std::string id;        // stable label; keys the per-bot rate draws
  std::string malware;
  std::string target;    // service-node name, or domain for DNS vectors
  VectorTag vector = VectorTag::Udp;
  double amp_factor = 0.0;                // reflection only, must be > 1
  std::vector<std::string> reflectors;    // reflection only
  RateDist per_bot;      // bits/s for floods, queries/s for water torture
  SimTime start_s = 0.0;
  double duration_s = 0.0;
  // Water torture only: per-query events when the volume is desk-scale,
  // a fluid rate at the resolver otherwise.
  enum class Emission : std::uint8_t { PerQuery, Rate };
  Emission emission = Emission::PerQuery;
};

// Random 12-character prefix over [a-z0-9], keyed so each (command, bot,
// sequence number) produces a stable, practically collision-free name.
std::string torture_prefix(std::uint64_t master_seed, const std::string& cmd,
                           std::uint64_t bot, std::uint64_t seq);

}  // namespace botsim
