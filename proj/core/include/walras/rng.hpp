#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace walras {

// Fixed default seed; every stochastic routine in the engine and its
// reports is reproducible from one seed.
inline constexpr std::uint64_t kDefaultSeed = 20;

/// mt19937_64 with hand-rolled variate mappings, so streams do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  double normal() {
    // Box-Muller; one sample per call keeps the stream simple.
    double u1 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace walras
