#pragma once

#include <cstdint>

namespace reptalk {

// Counter-based uniform generator: the SplitMix64 output function evaluated at
// seed + (counter+1) * golden gamma. Every value is a pure function of
// (seed, counter), so draw i can be assigned counters {4i..4i+3} and any
// partition of draws across workers reproduces the same stream bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start_counter = 0)
      : seed_(seed), counter_(start_counter) {}

  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static double uniform_at(std::uint64_t seed, std::uint64_t counter) {
    // 53-bit mantissa, uniform on [0,1)
    return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return at(seed_, counter_++); }
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace reptalk
