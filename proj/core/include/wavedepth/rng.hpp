#pragma once

#include <cstdint>

namespace wavedepth {

// SplitMix64. All seeded synthetic data (feature pyramids, test scenes,
// random weights) draws from this one generator so outputs are reproducible
// across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 24 bits of mantissa, exactly representable in float.
  float next_unit() { return static_cast<float>(next() >> 40) * 0x1.0p-24f; }

  // Uniform in [-1,1).
  float next_symmetric() { return 2.0f * next_unit() - 1.0f; }

  float uniform(float lo, float hi) { return lo + (hi - lo) * next_unit(); }

  // Unbiased enough for test-scene geometry.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace wavedepth
