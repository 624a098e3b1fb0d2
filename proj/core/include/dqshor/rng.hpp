#pragma once

#include <cstdint>
#include <random>

#include "dqshor/bigint.hpp"

namespace dqshor {

/// splitmix64 step; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic random source shared by every sampling path.
///
/// Wraps mt19937_64 (sequence fixed by the C++ standard) and derives values
/// only through the helpers below; std::uniform_*_distribution is avoided
/// because its output sequence is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed), gen_(seed) {}

  /// Uniform double on the 53-bit grid in [0, 1).
  double canonical() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound >= 1. Exact via rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    // Largest multiple of bound representable in 64 bits; values at or above
    // it would bias the modulus.
    const std::uint64_t limit = ~0ull - (~0ull % bound + 1) % bound;
    for (;;) {
      std::uint64_t x = gen_();
      if (x <= limit) return x % bound;
    }
  }

  /// Uniform BigInt in [0, bound), bound >= 1. Exact via bit-chunk rejection.
  BigInt uniform_bigint(const BigInt& bound) {
    const std::size_t bits = bit_length(bound - 1);
    if (bits == 0) return 0;
    for (;;) {
      BigInt x = 0;
      for (std::size_t filled = 0; filled < bits; filled += 64) {
        x <<= 64;
        x |= gen_();
      }
      x >>= (64 - bits % 64) % 64;
      if (x < bound) return x;
    }
  }

  /// Child stream for trial `index`, independent of draws taken from *this.
  Rng split(std::uint64_t index) const {
    return Rng(splitmix64(root_ ^ splitmix64(index + 1)));
  }

  std::uint64_t root_seed() const { return root_; }

 private:
  std::uint64_t root_;
  std::mt19937_64 gen_;
};

}  // namespace dqshor
