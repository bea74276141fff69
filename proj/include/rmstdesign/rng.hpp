#pragma once

#include <cstdint>

#include "rmstdesign/stats.hpp"

namespace rmst {

// splitmix64 step (Vigna). Good 64-bit mixing; each call advances the state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream keyed by up to four words. Subjects, replications and
// purposes get disjoint streams regardless of generation order or threading,
// so parallel simulation is bitwise reproducible.
class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::uint64_t k1 = 0, std::uint64_t k2 = 0,
           std::uint64_t k3 = 0) {
    std::uint64_t s = seed;
    state_ = splitmix64(s);
    s ^= k1 + 0x9e3779b97f4a7c15ULL;
    state_ ^= splitmix64(s);
    s ^= k2 + 0xc2b2ae3d27d4eb4fULL;
    state_ ^= splitmix64(s);
    s ^= k3 + 0x165667b19e3779f9ULL;
    state_ ^= splitmix64(s);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform on the open interval (0,1); 53-bit resolution, never 0 or 1.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via inverse CDF (deterministic, no rejection state).
  double next_normal() { return normal_quantile(next_uniform()); }

  bool next_bernoulli(double p) { return next_uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace rmst
