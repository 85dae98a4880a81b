#include "rsqrt_lut/fixed_point.hpp"

#include <cmath>

#include "rsqrt_lut/errors.hpp"

namespace rsqrt_lut {

namespace {

void check_bits(int bits) {
  if (bits < 0 || bits > kMaxFractionBits) {
    throw RangeError("fixed-point fraction bits out of range: " + std::to_string(bits));
  }
}

}  // namespace

FixedPoint FixedPoint::from_int(std::uint64_t n, int fraction_bits) {
  check_bits(fraction_bits);
  return {n << fraction_bits, fraction_bits};
}

FixedPoint FixedPoint::from_double(double v, int fraction_bits) {
  check_bits(fraction_bits);
  if (!(v >= 0.0)) throw RangeError("fixed-point value must be non-negative");
  return {static_cast<std::uint64_t>(std::ldexp(v, fraction_bits)), fraction_bits};
}

double FixedPoint::to_double() const {
  return std::ldexp(static_cast<double>(value), -fraction_bits);
}

FixedPoint FixedPoint::rescaled(int bits) const {
  check_bits(bits);
  if (bits >= fraction_bits) return {value << (bits - fraction_bits), bits};
  return {value >> (fraction_bits - bits), bits};
}

FixedPoint mul_trunc(const FixedPoint& a, const FixedPoint& b, int result_bits) {
  check_bits(result_bits);
  const unsigned __int128 product = static_cast<unsigned __int128>(a.value) * b.value;
  const int product_bits = a.fraction_bits + b.fraction_bits;
  unsigned __int128 scaled;
  if (product_bits >= result_bits) {
    scaled = product >> (product_bits - result_bits);
  } else {
    scaled = product << (result_bits - product_bits);
  }
  if ((scaled >> 64) != 0) throw RangeError("fixed-point product overflows 64 bits");
  return {static_cast<std::uint64_t>(scaled), result_bits};
}

}  // namespace rsqrt_lut
