#pragma once

#include "dqshor/bigint.hpp"
#include "dqshor/bitstring.hpp"

namespace dqshor {

/// Exact rational phase in [0, 1), kept reduced. All bit-window reads of a
/// phase go through frac_bits so expansions stay bit-exact at any position;
/// no floating point is involved until a probability is evaluated.
class PhaseFraction {
 public:
  /// den > 0; num is reduced into [0, den) first (value taken mod 1).
  PhaseFraction(BigInt num, BigInt den);

  static PhaseFraction zero() { return PhaseFraction(0, 1); }

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  double as_double() const { return ratio_as_double(num_, den_); }

  friend bool operator==(const PhaseFraction&, const PhaseFraction&) = default;

 private:
  BigInt num_, den_;
};

/// Binary expansion window: bits i..j (1-indexed from the point) of the
/// truncated expansion of omega, as a BitString of width j - i + 1.
/// Equals floor(omega * 2^j) mod 2^(j-i+1); dyadic rationals terminate with
/// an all-zeros tail. Requires 1 <= i <= j.
BitString frac_bits(const PhaseFraction& omega, std::size_t i, std::size_t j);

}  // namespace dqshor
