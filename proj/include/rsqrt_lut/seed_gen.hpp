#pragma once

#include <cstdint>

#include "rsqrt_lut/fixed_point.hpp"
#include "rsqrt_lut/fp_core.hpp"
#include "rsqrt_lut/lut_builder.hpp"

namespace rsqrt_lut {

inline constexpr int kSeedFractionBits = 26;

/// round(2^26 / sqrt(2)).
inline constexpr std::uint64_t kRsqrt2Seed = 47453133;

/// Initial approximation: mantissa_part * 2^result_exponent ~ 1/sqrt(x).
/// mantissa_part approximates 1/sqrt(m) for even exponents and 1/sqrt(2m) for odd ones.
struct Seed {
  FixedPoint mantissa_part{0, kSeedFractionBits};
  int result_exponent = 0;

  double to_double() const;
};

/// Folds the operand exponent into a mantissa seed for 1/sqrt(m), m in [1, 2).
Seed apply_exponent(const FixedPoint& mantissa_seed, int x_exponent);

/// Full-resolution table address: the top addr_bits of the fraction.
inline std::uint32_t table_address(const FpValue& x, int addr_bits) {
  return x.fraction >> (kMantissaBits - addr_bits);
}

/// Eq. 2 style linear interpolation between stored knots, integer arithmetic
/// truncated toward zero. Returns the stored word at knot positions.
std::uint32_t interpolate_word(const LookupTable& table, std::uint32_t address);

/// Table word at a full-resolution address, interpolating when the table is reduced.
std::uint32_t lookup_word(const LookupTable& table, std::uint32_t address);

Seed seed_direct(const LookupTable& mlt, const FpValue& x);
Seed seed_interpolated(const LookupTable& table, const FpValue& x);

/// Mantissa with its low (23 - addr_bits) fraction bits one's-complemented, 23 fraction bits.
FixedPoint modified_operand(const FpValue& x, int addr_bits);

Seed seed_alt(const LookupTable& alt, const FpValue& x);

/// Picks the seeding path the table's kind and interpolation factor call for.
Seed make_seed(const LookupTable& table, const FpValue& x);

}  // namespace rsqrt_lut
