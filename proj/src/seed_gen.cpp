#include "rsqrt_lut/seed_gen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rsqrt_lut/errors.hpp"

namespace rsqrt_lut {

namespace {

constexpr std::uint64_t kSeedOne = std::uint64_t{1} << kSeedFractionBits;

FixedPoint mlt_word_to_mantissa(std::uint32_t word, int word_bits) {
  return FixedPoint{static_cast<std::uint64_t>(word) << (kSeedFractionBits - word_bits),
                    kSeedFractionBits};
}

Seed alt_seed_from_coefficient(std::uint32_t coefficient, int word_bits, const FpValue& x,
                               int addr_bits) {
  const FixedPoint c{coefficient, word_bits};
  const FixedPoint product = mul_trunc(c, modified_operand(x, addr_bits), kSeedFractionBits);
  return apply_exponent(product, x.exponent);
}

}  // namespace

double Seed::to_double() const {
  return std::ldexp(mantissa_part.to_double(), result_exponent);
}

Seed apply_exponent(const FixedPoint& mantissa_seed, int x_exponent) {
  FixedPoint m = mantissa_seed.rescaled(kSeedFractionBits);
  // 1/sqrt(m) never exceeds 1 on [1, 2).
  m.value = std::min(m.value, kSeedOne);
  if ((x_exponent & 1) == 0) return {m, -x_exponent / 2};
  const FixedPoint rsqrt2{kRsqrt2Seed, kSeedFractionBits};
  return {mul_trunc(m, rsqrt2, kSeedFractionBits), -(x_exponent - 1) / 2};
}

std::uint32_t interpolate_word(const LookupTable& table, std::uint32_t address) {
  const int factor = table.spec.interp_factor;
  const int shift = std::countr_zero(static_cast<unsigned>(factor));
  const std::size_t knot = address >> shift;
  const std::int64_t offset = address & static_cast<std::uint32_t>(factor - 1);
  const std::int64_t lo = table.word(knot);
  if (offset == 0) return static_cast<std::uint32_t>(lo);
  const std::int64_t hi = table.word(knot + 1);
  // Signed division truncates toward zero; the slope of an MLT is negative.
  return static_cast<std::uint32_t>(lo + (offset * (hi - lo)) / factor);
}

std::uint32_t lookup_word(const LookupTable& table, std::uint32_t address) {
  if (address >= table.spec.full_size()) throw RangeError("table address out of range");
  return table.spec.interp_factor == 1 ? table.word(address) : interpolate_word(table, address);
}

Seed seed_direct(const LookupTable& mlt, const FpValue& x) {
  if (mlt.spec.kind != TableKind::kMain || mlt.spec.interp_factor != 1) {
    throw ConfigError("direct seeding needs a full MLT");
  }
  const std::uint32_t word = mlt.word(table_address(x, mlt.spec.addr_bits));
  return apply_exponent(mlt_word_to_mantissa(word, mlt.spec.word_bits), x.exponent);
}

Seed seed_interpolated(const LookupTable& table, const FpValue& x) {
  if (table.spec.interp_factor < 2) throw ConfigError("interpolated seeding needs F >= 2");
  const std::uint32_t word = interpolate_word(table, table_address(x, table.spec.addr_bits));
  if (table.spec.kind == TableKind::kMain) {
    return apply_exponent(mlt_word_to_mantissa(word, table.spec.word_bits), x.exponent);
  }
  return alt_seed_from_coefficient(word, table.spec.word_bits, x, table.spec.addr_bits);
}

FixedPoint modified_operand(const FpValue& x, int addr_bits) {
  const std::uint32_t low_mask = (1u << (kMantissaBits - addr_bits)) - 1;
  return FixedPoint{x.significand() ^ low_mask, kMantissaBits};
}

Seed seed_alt(const LookupTable& alt, const FpValue& x) {
  if (alt.spec.kind != TableKind::kAuxiliary) throw ConfigError("seed_alt needs an ALT");
  const std::uint32_t c = lookup_word(alt, table_address(x, alt.spec.addr_bits));
  return alt_seed_from_coefficient(c, alt.spec.word_bits, x, alt.spec.addr_bits);
}

Seed make_seed(const LookupTable& table, const FpValue& x) {
  if (table.spec.kind == TableKind::kAuxiliary) return seed_alt(table, x);
  return table.spec.interp_factor == 1 ? seed_direct(table, x) : seed_interpolated(table, x);
}

}  // namespace rsqrt_lut
