#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fragility/stats.hpp"

namespace fragility {

// Deterministic RNG stream. Normal draws use Box-Muller without caching so
// a stream's output depends only on its seed and the number of calls made,
// never on which distribution object consumed it. Parallel work items derive
// independent streams from a master seed and a key, which keeps results
// identical whatever the thread count.

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (key + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  RngStream(std::uint64_t seed, std::uint64_t key) : engine_(mix_seed(seed, key)) {}

  // Uniform on (0, 1), never exactly 0 or 1.
  double uniform() {
    const std::uint64_t r = engine_();
    return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fragility
