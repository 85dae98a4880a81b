#include "rsqrt_lut/fp_core.hpp"

#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>

namespace rsqrt_lut {

namespace mp = boost::multiprecision;

const char* to_string(FloatClass c) {
  switch (c) {
    case FloatClass::kZero: return "zero";
    case FloatClass::kSubnormal: return "subnormal";
    case FloatClass::kNegative: return "negative";
    case FloatClass::kInfinity: return "infinity";
    case FloatClass::kNaN: return "nan";
    case FloatClass::kPositiveNormal: return "positive normal";
  }
  return "unknown";
}

FloatClass classify(std::uint32_t bits) {
  const std::uint32_t exp_field = (bits >> kMantissaBits) & 0xFFu;
  const std::uint32_t frac = bits & ((1u << kMantissaBits) - 1);
  if (exp_field == 0xFFu) return frac == 0 ? FloatClass::kInfinity : FloatClass::kNaN;
  if (exp_field == 0) return frac == 0 ? FloatClass::kZero : FloatClass::kSubnormal;
  if (bits >> 31) return FloatClass::kNegative;
  return FloatClass::kPositiveNormal;
}

FpValue decompose(std::uint32_t bits) {
  const FloatClass c = classify(bits);
  if (c != FloatClass::kPositiveNormal) {
    throw DomainError(c, std::string("rsqrt input is ") + to_string(c) + ", expected a positive normal number");
  }
  return {0, static_cast<int>((bits >> kMantissaBits) & 0xFFu) - kExponentBias,
          bits & ((1u << kMantissaBits) - 1)};
}

std::uint32_t compose(const FpValue& v) {
  if (v.exponent < kMinExponent || v.exponent > kMaxExponent) {
    throw RangeError("exponent out of range: " + std::to_string(v.exponent));
  }
  if (v.sign != 0) throw RangeError("sign must be 0");
  if (v.fraction >> kMantissaBits) throw RangeError("fraction wider than 23 bits");
  return (static_cast<std::uint32_t>(v.exponent + kExponentBias) << kMantissaBits) | v.fraction;
}

FpValue from_float(float f) { return decompose(std::bit_cast<std::uint32_t>(f)); }

float to_float(const FpValue& v) { return std::bit_cast<float>(compose(v)); }

double FpValue::to_double() const {
  return std::ldexp(static_cast<double>(significand()), exponent - kMantissaBits);
}

int ExactScaled::exponent() const {
  return static_cast<int>(std::bit_width(value)) - 1 - scale_bits;
}

double ExactScaled::to_double() const {
  return std::ldexp(static_cast<double>(value), -scale_bits);
}

ExactScaled ref_rsqrt(const FpValue& x, int precision_bits) {
  if (precision_bits < kMinOraclePrecision || precision_bits > kMaxOraclePrecision) {
    throw RangeError("oracle precision must lie in [48, 64]");
  }
  // Fold odd exponents into the significand so the remaining power of two has an exact root.
  mp::cpp_int sig = x.significand();
  int even_exp = x.exponent;
  if (even_exp & 1) {
    sig <<= 1;
    even_exp -= 1;
  }
  // sig / 2^23 lies in [1, 4), so floor(2^p / sqrt(sig / 2^23)) lies in [2^(p-1), 2^p].
  const mp::cpp_int scaled = (mp::cpp_int(1) << (2 * precision_bits + kMantissaBits)) / sig;
  const mp::cpp_int root = mp::sqrt(scaled);

  ExactScaled r;
  int result_exp;
  if (root == (mp::cpp_int(1) << precision_bits)) {
    r.value = std::uint64_t{1} << (precision_bits - 1);
    result_exp = -even_exp / 2;
  } else {
    r.value = root.convert_to<std::uint64_t>();
    result_exp = -even_exp / 2 - 1;
  }
  r.scale_bits = precision_bits - 1 - result_exp;
  return r;
}

UlpError ulp_error(const FixedPoint& approx, int exponent_shift, const ExactScaled& ref) {
  // approx = A * 2^-(g - shift), ref = V * 2^-S; align both on the finer grid.
  const int approx_scale = approx.fraction_bits - exponent_shift;
  const int common = std::max(approx_scale, ref.scale_bits);
  const mp::cpp_int a = mp::cpp_int(approx.value) << (common - approx_scale);
  const mp::cpp_int v = mp::cpp_int(ref.value) << (common - ref.scale_bits);
  const mp::cpp_int diff = a > v ? a - v : v - a;
  if (diff == 0) return {0.0};
  // diff * 2^-common / 2^(e_r - 23); split the ldexp so huge shifts stay finite.
  const double d = diff.convert_to<double>();
  return {std::ldexp(d, kMantissaBits - ref.exponent() - common)};
}

UlpError ulp_error(const FixedPoint& approx, const FpValue& x) {
  return ulp_error(approx, 0, ref_rsqrt(x));
}

UlpError ulp_error(const FpValue& approx, const FpValue& x) {
  const FixedPoint sig{approx.significand(), kMantissaBits};
  return ulp_error(sig, approx.exponent, ref_rsqrt(x));
}

double error_exponent(const UlpError& e) {
  if (e.ulps <= 0.0) return kExactExponent;
  return std::log2(e.ulps) - kMantissaBits;
}

}  // namespace rsqrt_lut
