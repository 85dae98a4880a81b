#pragma once

#include <cstdint>

namespace rsqrt_lut {

inline constexpr int kDefaultFractionBits = 30;
inline constexpr int kMinFractionBits = 24;
inline constexpr int kMaxFractionBits = 60;

/// Unsigned fixed-point scalar: value * 2^-fraction_bits.
///
/// Integer part is limited to a few bits (NR iterates live in (0, 4)), so a
/// 64-bit raw value covers fraction_bits up to 60 and every product fits in
/// 128 bits.
struct FixedPoint {
  std::uint64_t value = 0;
  int fraction_bits = kDefaultFractionBits;

  static FixedPoint from_int(std::uint64_t n, int fraction_bits);
  /// Truncating conversion, intended for tests and diagnostics.
  static FixedPoint from_double(double v, int fraction_bits);

  double to_double() const;
  bool is_zero() const { return value == 0; }

  /// Rescales to `bits` fraction bits; narrowing truncates toward zero.
  FixedPoint rescaled(int bits) const;

  friend bool operator==(const FixedPoint&, const FixedPoint&) = default;
};

/// a * b truncated toward zero to `result_bits` fraction bits.
FixedPoint mul_trunc(const FixedPoint& a, const FixedPoint& b, int result_bits);

}  // namespace rsqrt_lut
