#include "dqshor/fraction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/integer.hpp>

namespace dqshor {

double ratio_as_double(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw std::invalid_argument("ratio_as_double: denominator must be positive");
  if (num.is_zero()) return 0.0;
  bool neg = num < 0;
  BigInt n = abs(num), d = den;
  // Shift both by the same amount so the wider operand keeps 512 bits; the
  // quotient is unchanged up to ~2^-500 relative error and both conversions
  // stay inside double range.
  std::size_t mb = std::max(bit_length(n), bit_length(d));
  if (mb > 512) {
    n >>= mb - 512;
    d >>= mb - 512;
  }
  double r = d.is_zero() ? std::numeric_limits<double>::infinity()
                         : n.convert_to<double>() / d.convert_to<double>();
  return neg ? -r : r;
}

PhaseFraction::PhaseFraction(BigInt num, BigInt den) {
  if (den <= 0) throw std::invalid_argument("PhaseFraction: denominator must be positive");
  num %= den;
  if (num < 0) num += den;
  BigInt g = boost::multiprecision::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = std::move(num);
  den_ = std::move(den);
}

BitString frac_bits(const PhaseFraction& omega, std::size_t i, std::size_t j) {
  if (i < 1 || i > j) throw std::invalid_argument("frac_bits: need 1 <= i <= j");
  BigInt window = (omega.numerator() << j) / omega.denominator();
  return BitString(j - i + 1, window & (pow2(j - i + 1) - 1));
}

}  // namespace dqshor
