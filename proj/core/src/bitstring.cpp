#include "dqshor/bitstring.hpp"

#include <stdexcept>

namespace dqshor {

BitString::BitString(std::size_t width, BigInt value) : width_(width), value_(std::move(value)) {
  if (width_ == 0) throw std::invalid_argument("BitString width must be >= 1");
  if (value_ < 0 || bit_length(value_) > width_)
    throw std::invalid_argument("BitString value out of range for width " +
                                std::to_string(width_));
}

BitString BitString::parse(std::string_view bits) {
  if (bits.empty()) throw std::invalid_argument("BitString::parse: empty string");
  BigInt v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("BitString::parse: expected 0/1");
    v = (v << 1) | (c == '1' ? 1 : 0);
  }
  return BitString(bits.size(), std::move(v));
}

int BitString::bit(std::size_t i) const {
  if (i < 1 || i > width_) throw std::out_of_range("BitString::bit index");
  return boost::multiprecision::bit_test(value_, static_cast<unsigned>(width_ - i)) ? 1 : 0;
}

BitString BitString::slice(std::size_t i, std::size_t j) const {
  if (i < 1 || i > j || j > width_) throw std::out_of_range("BitString::slice range");
  BigInt shifted = value_ >> (width_ - j);
  return BitString(j - i + 1, shifted & (pow2(j - i + 1) - 1));
}

BitString BitString::concat(const BitString& rhs) const {
  return BitString(width_ + rhs.width_, (value_ << rhs.width_) | rhs.value_);
}

BitString BitString::add_mod(const BigInt& delta) const {
  BigInt m = pow2(width_);
  BigInt v = (value_ + delta) % m;
  if (v < 0) v += m;
  return BitString(width_, std::move(v));
}

std::string BitString::str() const {
  std::string out(width_, '0');
  for (std::size_t i = 0; i < width_; ++i)
    if (boost::multiprecision::bit_test(value_, static_cast<unsigned>(i)))
      out[width_ - 1 - i] = '1';
  return out;
}

BigInt dt_distance(const BitString& x, const BitString& y) {
  if (x.width() != y.width())
    throw std::invalid_argument("dt_distance: widths differ");
  BigInt d = abs(x.value() - y.value());
  BigInt wrap = pow2(x.width()) - d;
  return d < wrap ? d : wrap;
}

}  // namespace dqshor
