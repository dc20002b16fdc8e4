#include "engine/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace botsim {

std::uint64_t stable_hash64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view label)
    : label_(label) {
  std::uint64_t s = master_seed ^ stable_hash64(label);
  for (auto& word : state_) {
    s = mix64(s);
    word = s;
  }
  // All-zero state is invalid for xoshiro; mix64 output makes it, in
  // practice, unreachable, but guard anyway.
  if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0) {
    state_[0] = 0x853c49e6748fea9bULL;
  }
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_unit() { return unit_from_bits(next_u64()); }

double RngStream::uniform(double lo, double hi) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("uniform: lo > hi on stream " + label_);
  }
  return lo + (hi - lo) * next_unit();
}

bool RngStream::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli: p outside [0,1] on stream " +
                                label_);
  }
  return next_unit() < p;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("exponential: rate <= 0 on stream " + label_);
  }
  return -std::log1p(-next_unit()) / rate;
}

std::size_t RngStream::weighted_choice(std::span<const double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("weighted_choice: empty weight set");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("weighted_choice: negative weight");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("weighted_choice: zero total weight");
  }
  double mark = next_unit() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    mark -= weights[i];
    if (mark < 0.0) return i;
  }
  return weights.size() - 1;  // unit draw hit the very top of the range
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("below: zero bound on stream " + label_);
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % bound;
}

std::int64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) {
    throw std::invalid_argument("poisson: negative mean on stream " + label_);
  }
  if (mean == 0.0) return 0;
  // Exact halving recursion keeps the inversion step numerically safe.
  if (mean > 60.0) {
    const double half = mean / 2.0;
    return poisson(half) + poisson(mean - half);
  }
  const double u = next_unit();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  std::int64_t k = 0;
  while (u >= cdf && k < 4096) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

std::int64_t RngStream::binomial(std::int64_t trials, double p) {
  if (trials < 0) {
    throw std::invalid_argument("binomial: negative trial count");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial: p outside [0,1]");
  }
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (p > 0.5) return trials - binomial(trials, 1.0 - p);
  // (1-p)^n must stay representable for CDF inversion; halve until it is.
  if (static_cast<double>(trials) * p > 500.0) {
    const std::int64_t half = trials / 2;
    return binomial(half, p) + binomial(trials - half, p);
  }
  if (trials <= 64) {
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < trials; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }
  const double u = next_unit();
  const double odds = p / (1.0 - p);
  double pmf = std::pow(1.0 - p, static_cast<double>(trials));
  double cdf = pmf;
  std::int64_t k = 0;
  while (u >= cdf && k < trials) {
    pmf *= odds * static_cast<double>(trials - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pmf;
  }
  return k;
}

double keyed_unit(std::uint64_t master_seed, std::string_view label,
                  std::uint64_t key) {
  std::uint64_t x = master_seed ^ stable_hash64(label);
  x = mix64(x ^ mix64(key));
  return unit_from_bits(x);
}

}  // namespace botsim
