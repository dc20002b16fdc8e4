#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace botsim {

// FNV-1a, fixed constants; stable across platforms and builds.
std::uint64_t stable_hash64(std::string_view text);

// splitmix64 finalizer; used for seed fan-out and keyed one-shot draws.
std::uint64_t mix64(std::uint64_t x);

// Deterministic random stream (xoshiro256**). A stream is identified by
// (master seed, label); the same pair replays the same sequence everywhere.
// Streams are independent: draws on one never perturb another, so adding a
// node (and its stream) does not reshuffle the rest of the simulation.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  std::uint64_t next_u64();
  double next_unit();  // [0, 1), 53-bit resolution

  double uniform(double lo, double hi);
  bool bernoulli(double p);
  double exponential(double rate);
  std::size_t weighted_choice(std::span<const double> weights);

  // Uniform integer in [0, bound), bound > 0. Rejection-free bias is not
  // needed at simulation scale, but we debias anyway to keep draws exact.
  std::uint64_t below(std::uint64_t bound);

  std::int64_t poisson(double mean);
  std::int64_t binomial(std::int64_t trials, double p);

  const std::string& label() const { return label_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::string label_;
};

// Order-independent one-shot draw in [0, 1): a pure function of
// (master seed, label, key). Used where per-entity draws must not depend on
// how many other entities exist or in what order they are processed.
double keyed_unit(std::uint64_t master_seed, std::string_view label,
                  std::uint64_t key);

}  // namespace botsim
