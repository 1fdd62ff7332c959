#pragma once

#include <cstdint>
#include <cmath>

// Fixed random number recipe, so that instances regenerate bit-identically
// from their seed. Do not swap in std::mt19937 / std::normal_distribution:
// their stream is not pinned down by the standard.
//
//   state   xoshiro256++ (Blackman & Vigna), seeded with four consecutive
//           splitmix64 outputs of the 64-bit seed
//   u64     one xoshiro256++ step
//   uniform in [0,1): (u64 >> 11) * 2^-53
//   normal  Box-Muller, consuming exactly two uniforms per variate:
//           sqrt(-2 log(1-u1)) * cos(2 pi u2)   (no caching of the sin twin)
//   below(b)  u64 % b  (the modulo bias is irrelevant at our ranges)

namespace fista {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace fista
