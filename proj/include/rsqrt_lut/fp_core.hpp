#pragma once

#include <cstdint>
#include <limits>

#include "rsqrt_lut/errors.hpp"
#include "rsqrt_lut/fixed_point.hpp"

namespace rsqrt_lut {

inline constexpr int kMantissaBits = 23;
inline constexpr int kExponentBias = 127;
inline constexpr int kMinExponent = -126;
inline constexpr int kMaxExponent = 127;

/// Decomposed positive normal binary32 value: (1 + fraction * 2^-23) * 2^exponent.
struct FpValue {
  std::uint32_t sign = 0;
  int exponent = 0;
  std::uint32_t fraction = 0;

  /// 24-bit significand including the implicit leading one.
  std::uint32_t significand() const { return (1u << kMantissaBits) | fraction; }
  double to_double() const;

  friend bool operator==(const FpValue&, const FpValue&) = default;
};

FloatClass classify(std::uint32_t bits);

FpValue decompose(std::uint32_t bits);
std::uint32_t compose(const FpValue& v);

FpValue from_float(float f);
float to_float(const FpValue& v);

inline constexpr int kDefaultOraclePrecision = 64;
inline constexpr int kMinOraclePrecision = 48;
inline constexpr int kMaxOraclePrecision = 64;

/// value * 2^-scale_bits. The oracle normalizes value into
/// [2^(precision-1), 2^precision), so scale_bits may be negative for tiny inputs.
struct ExactScaled {
  std::uint64_t value = 0;
  int scale_bits = 0;

  /// Unbiased binary exponent of the represented number.
  int exponent() const;
  double to_double() const;
};

/// Reciprocal square root using integer arithmetic only:
/// floor(sqrt(floor(2^(2p+23) / M))) for the even-exponent-adjusted significand M.
/// Relative error is below 2^-(precision_bits-1).
ExactScaled ref_rsqrt(const FpValue& x, int precision_bits = kDefaultOraclePrecision);

/// Absolute error in units of 2^(e_r - 23), e_r being the reference's exponent.
struct UlpError {
  double ulps = 0.0;
  bool acceptable() const { return ulps < 1.0; }
  bool exact() const { return ulps == 0.0; }
};

/// Error of approx * 2^exponent_shift against a precomputed reference.
UlpError ulp_error(const FixedPoint& approx, int exponent_shift, const ExactScaled& ref);
UlpError ulp_error(const FixedPoint& approx, const FpValue& x);
UlpError ulp_error(const FpValue& approx, const FpValue& x);

/// log2(ulps) - 23: a one-ULP error maps to -23. Exact results map to -infinity.
double error_exponent(const UlpError& e);

inline constexpr double kExactExponent = -std::numeric_limits<double>::infinity();

}  // namespace rsqrt_lut
