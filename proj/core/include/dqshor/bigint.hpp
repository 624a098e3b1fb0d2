#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace dqshor {

using BigInt = boost::multiprecision::cpp_int;

/// num/den as a double without overflowing either conversion.
/// Aligns both operands so the leading 64 bits survive, then divides.
double ratio_as_double(const BigInt& num, const BigInt& den);

/// Bit length of a non-negative value; bit_length(0) == 0.
inline std::size_t bit_length(const BigInt& v) {
  return v.is_zero() ? 0 : boost::multiprecision::msb(v) + 1;
}

inline BigInt pow2(std::size_t e) {
  BigInt r = 1;
  return r << e;
}

}  // namespace dqshor
