#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace deepselect {

// Seeded random stream shared by every stochastic step of a run. Bounded
// integers and unit reals are derived from raw 64-bit draws so sequences do
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::size_t uniform_index(std::size_t bound) {
    // Lemire's nearly-divisionless rejection method.
    const std::uint64_t range = bound;
    __uint128_t product = static_cast<__uint128_t>(engine_()) * range;
    auto low = static_cast<std::uint64_t>(product);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        product = static_cast<__uint128_t>(engine_()) * range;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::size_t>(product >> 64);
  }

  // Uniform in [lo, hi] inclusive.
  std::size_t uniform_between(std::size_t lo, std::size_t hi) { return lo + uniform_index(hi - lo + 1); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller. No second value is cached.
  double normal();

  // Uniform k-subset of [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace deepselect
