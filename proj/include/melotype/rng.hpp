#pragma once

#include <cstdint>

namespace melotype {

// PCG32 (O'Neill's pcg32_random_r). Chosen for the reproducibility contract:
// the algorithm is fixed, tiny, and platform-independent, and the (seed,
// stream) constructor gives each batch item its own independent stream.
// std::mt19937 is portable but the standard <random> distributions are not,
// so all draws go through next_u32 / next_double below.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream) {
    state_ = 0;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // 53-bit uniform double in [0, 1).
  double next_double() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection; unbiased for any bound.
  std::uint32_t next_below(std::uint32_t bound) {
    std::uint32_t threshold = (-bound) % bound;
    for (;;) {
      std::uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace melotype
