#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace brnes {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic random stream. All draws are derived from the raw mt19937_64
// output with fixed arithmetic, so sequences are reproducible across
// platforms and standard library versions (std::*_distribution is not).
class RngStream {
 public:
  RngStream() : RngStream(0) {}
  explicit RngStream(std::uint64_t seed)
      : seed_base_(splitmix64(seed)), engine_(splitmix64(seed)) {}

  // Independent child stream; `tag` distinguishes siblings.
  RngStream derive(std::uint64_t tag) const {
    return RngStream(seed_base_ ^ splitmix64(tag ^ 0xa5a5a5a5a5a5a5a5ull));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1. Rejection sampling over a power-of-two
  // mask keeps the result unbiased.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = next_u64() & mask;
    } while (v >= n);
    return v;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; the second variate of the pair is discarded so each call
  // consumes exactly two uniforms.
  double normal(double mean, double stddev) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    return mean + stddev * z;
  }

  // Normal truncated to (0, inf) by resampling.
  double normal_positive(double mean, double stddev) {
    double v = normal(mean, stddev);
    while (v <= 0.0) v = normal(mean, stddev);
    return v;
  }

 private:
  std::uint64_t seed_base_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace brnes
