#include "attack/commands.hpp"

#include <stdexcept>

#include "engine/rng.hpp"

namespace botsim {

double RateDist::draw(std::uint64_t master_seed, const std::string& label,
                      std::uint64_t key) const {
  if (kind == Kind::Fixed) return a;
  return a + (b - a) * keyed_unit(master_seed, label, key);
}

double RateDist::mean() const {
  return kind == Kind::Fixed ? a : 0.5 * (a + b);
}

double RateDist::upper() const { return kind == Kind::Fixed ? a : b; }

void RateDist::validate() const {
  if (kind == Kind::Fixed) {
    if (!(a > 0.0)) throw std::invalid_argument("rate must be positive");
    return;
  }
  if (!(a > 0.0) || !(b >= a)) {
    throw std::invalid_argument("uniform rate bounds must satisfy 0 < a <= b");
  }
}

std::string torture_prefix(std::uint64_t master_seed, const std::string& cmd,
                           std::uint64_t bot, std::uint64_t seq) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uint64_t x = mix64(master_seed ^ stable_hash64(cmd));
  x = mix64(x ^ bot);
  x = mix64(x ^ seq);
  std::string prefix(12, 'a');
  for (char& c : prefix) {
    x = mix64(x);
    c = kAlphabet[x % 36];
  }
  return prefix;
}

}  // namespace botsim
