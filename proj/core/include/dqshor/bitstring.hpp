#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "dqshor/bigint.hpp"

namespace dqshor {

/// Fixed-width bit string m_1 m_2 ... m_w, indexed from 1 at the most
/// significant bit. Width is part of the identity: 0101 != 101.
class BitString {
 public:
  /// value must satisfy 0 <= value < 2^width.
  BitString(std::size_t width, BigInt value);

  /// Parse from "0101" form; width = string length.
  static BitString parse(std::string_view bits);

  std::size_t width() const { return width_; }
  const BigInt& value() const { return value_; }

  /// Bit at position i, 1-indexed from the most significant end.
  int bit(std::size_t i) const;

  /// Contiguous sub-string positions i..j inclusive, 1 <= i <= j <= width.
  BitString slice(std::size_t i, std::size_t j) const;

  /// this followed by rhs.
  BitString concat(const BitString& rhs) const;

  /// (value + delta) mod 2^width, delta may be negative.
  BitString add_mod(const BigInt& delta) const;

  std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;

  /// Width-major ordering so BitString can key ordered containers.
  friend bool operator<(const BitString& a, const BitString& b) {
    if (a.width_ != b.width_) return a.width_ < b.width_;
    return a.value_ < b.value_;
  }

 private:
  std::size_t width_;
  BigInt value_;
};

/// Circular distance min(|x-y|, 2^t - |x-y|) between equal-width strings.
/// Metric on Z_{2^t}; both arguments must share width t >= 1.
BigInt dt_distance(const BitString& x, const BitString& y);

}  // namespace dqshor
