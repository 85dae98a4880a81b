#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rsqrt_lut/seed_gen.hpp"

using namespace rsqrt_lut;

namespace {

FpValue random_normal(std::mt19937_64& rng) {
  return decompose(static_cast<std::uint32_t>(((rng() % 254) + 1) << 23) |
                   static_cast<std::uint32_t>(rng() & 0x7FFFFF));
}

}  // namespace

TEST_CASE("rsqrt(2) seed constant") {
  const double exact = std::ldexp(1.0, 26) / std::sqrt(2.0);
  CHECK(std::abs(static_cast<double>(kRsqrt2Seed) - exact) <= 0.5);
}

TEST_CASE("seed_direct") {
  const LookupTable t = build_mlt(11);
  const Seed one = seed_direct(t, from_float(1.0f));
  CHECK(one.result_exponent == 0);
  CHECK(one.mantissa_part.value == std::uint64_t{8387584} << 3);
  CHECK(one.mantissa_part.to_double() == doctest::Approx(0.99987793).epsilon(1e-8));

  const Seed top = seed_direct(t, FpValue{0, 0, (1u << 23) - 1});
  CHECK(top.mantissa_part.value == std::uint64_t{5932003} << 3);
  CHECK(top.mantissa_part.to_double() == doctest::Approx(0.70716).epsilon(1e-5));

  CHECK_THROWS_AS(seed_direct(reduce(t, 2), from_float(1.0f)), ConfigError);
  CHECK_THROWS_AS(seed_direct(build_alt(8), from_float(1.0f)), ConfigError);
}

TEST_CASE("compressed and uncompressed MLTs seed identically") {
  const LookupTable t = build_mlt(11);
  const LookupTable c = compress_words(t);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const FpValue x = random_normal(rng);
    const Seed a = seed_direct(t, x);
    const Seed b = seed_direct(c, x);
    REQUIRE(a.mantissa_part == b.mantissa_part);
    REQUIRE(a.result_exponent == b.result_exponent);
  }
}

TEST_CASE("apply_exponent") {
  const FixedPoint m{std::uint64_t{8387584} << 3, kSeedFractionBits};
  const Seed even = apply_exponent(m, 0);
  CHECK(even.mantissa_part == m);
  CHECK(even.result_exponent == 0);

  const Seed four = apply_exponent(m, 2);
  CHECK(four.result_exponent == -1);
  CHECK(four.to_double() == doctest::Approx(0.49994).epsilon(1e-5));

  // trunc(8387584 * 8 * 47453133 / 2^26), frozen from an integer evaluation.
  const Seed two = apply_exponent(m, 1);
  CHECK(two.result_exponent == 0);
  CHECK(two.mantissa_part.value == 47447340u);
  CHECK(two.to_double() == doctest::Approx(0.70702).epsilon(1e-5));

  const Seed half = apply_exponent(m, -1);
  CHECK(half.result_exponent == 1);
  CHECK(half.mantissa_part.value == 47447340u);

  const Seed big = apply_exponent(m, -126);
  CHECK(big.result_exponent == 63);
  const Seed small = apply_exponent(m, 127);
  CHECK(small.result_exponent == -63);
}

TEST_CASE("interpolate_word on a synthetic line") {
  LookupTable t;
  t.spec = TableSpec{TableKind::kMain, 4, 23, 2, false};
  t.entries.assign(9, 0);
  t.entries[3] = 10;
  t.entries[4] = 20;
  CHECK(interpolate_word(t, 6) == 10);
  CHECK(interpolate_word(t, 7) == 15);

  t.spec.interp_factor = 4;
  t.entries.assign(5, 0);
  t.entries[1] = 100;
  t.entries[2] = 93;
  // Decreasing slope truncates toward zero: 100 + (-7 * 3) / 4 = 100 - 5.
  CHECK(interpolate_word(t, 7) == 95);
  CHECK(interpolate_word(t, 5) == 99);
}

TEST_CASE("interpolated seeds equal direct seeds at knots") {
  const LookupTable full = build_mlt(12);
  for (int f : {2, 4, 8, 16, 32, 64}) {
    const LookupTable r = reduce(full, f);
    for (std::uint32_t a = 0; a < 4096; a += f) {
      const FpValue x{0, 0, a << 11};
      REQUIRE(seed_interpolated(r, x).mantissa_part == seed_direct(full, x).mantissa_part);
    }
  }
}

TEST_CASE("12-bit MLT with F = 2 interpolates within 2 units of the full table") {
  const LookupTable full = build_mlt(12);
  const LookupTable r = reduce(full, 2);
  std::int64_t worst = 0;
  for (std::uint32_t a = 0; a < 4096; ++a) {
    const std::int64_t d = static_cast<std::int64_t>(interpolate_word(r, a)) - full.entries[a];
    worst = std::max(worst, std::abs(d));
  }
  CHECK(worst <= 2);
}

TEST_CASE("max seed error is non-decreasing in F") {
  const LookupTable full = build_mlt(12);
  long double prev = 0.0L;
  for (int f : {1, 2, 4, 8, 16, 32, 64}) {
    const LookupTable t = reduce(full, f);
    long double worst = 0.0L;
    for (std::uint32_t a = 0; a < 4096; ++a) {
      // Segment midpoint input.
      const FpValue x{0, 0, (a << 11) | (1u << 10)};
      const Seed s = make_seed(t, x);
      worst = std::max(worst, testing::rel_error(s.to_double(), x));
    }
    CHECK(worst >= prev);
    prev = worst;
  }
}

TEST_CASE("11-bit MLT seeds are accurate to 11 bits at every segment midpoint") {
  const LookupTable t = build_mlt(11);
  for (std::uint32_t a = 0; a < 2048; ++a) {
    const FpValue x{0, 0, (a << 12) | (1u << 11)};
    const Seed s = seed_direct(t, x);
    REQUIRE(ulp_error(s.mantissa_part, s.result_exponent, ref_rsqrt(x)).ulps < std::ldexp(1.0, 12));
  }
}

TEST_CASE("seeds stay in (0.25, 1]") {
  const std::vector<LookupTable> tables = {build_mlt(11), reduce(build_mlt(11), 64), build_alt(6),
                                           build_alt(12), reduce(build_alt(12), 8)};
  std::mt19937_64 rng(9);
  for (const auto& t : tables) {
    for (int i = 0; i < 2000; ++i) {
      const FpValue x = random_normal(rng);
      const double m = make_seed(t, x).mantissa_part.to_double();
      REQUIRE(m > 0.25);
      REQUIRE(m <= 1.0);
    }
    for (std::uint32_t f : {0u, 1u, (1u << 23) - 1}) {
      for (int e : {0, 1}) {
        const double m = make_seed(t, FpValue{0, e, f}).mantissa_part.to_double();
        CHECK(m > 0.25);
        CHECK(m <= 1.0);
      }
    }
  }
}

TEST_CASE("modified_operand complements the low bits") {
  const FpValue x{0, 0, 0x123456};
  const FixedPoint m = modified_operand(x, 12);
  CHECK(m.fraction_bits == 23);
  CHECK(m.value == ((1u << 23) | 0x123000u | (0x456u ^ 0x7FFu)));
}

TEST_CASE("ALT seeds reproduce the fitted residuals") {
  std::vector<AltSegmentFit> fits;
  const LookupTable t = build_alt(12, kAltWordBits, &fits);
  for (std::uint32_t seg : {0u, 1000u, 2047u, 4095u}) {
    const FpValue x{0, 0, (seg << 11) | fits[seg].worst_offset};
    const Seed s = seed_alt(t, x);
    const long double err = testing::rel_error(s.to_double(), x);
    // Truncating the product to 26 bits moves the error by at most 2^-25 relative.
    CHECK(std::abs(static_cast<double>(err) - fits[seg].residual) < std::ldexp(1.0, -24));
  }
}

TEST_CASE("ALT seed accuracy bounds") {
  const LookupTable t12 = build_alt(12);
  const LookupTable t6 = build_alt(6);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5000; ++i) {
    const FpValue x = random_normal(rng);
    const ExactScaled ref = ref_rsqrt(x);
    const Seed s12 = seed_alt(t12, x);
    REQUIRE(error_exponent(ulp_error(s12.mantissa_part, s12.result_exponent, ref)) <= -12.0);
    const Seed s6 = seed_alt(t6, x);
    REQUIRE(error_exponent(ulp_error(s6.mantissa_part, s6.result_exponent, ref)) <= -4.0);
  }
}

TEST_CASE("ALT and MLT seeds agree for 12 address bits") {
  const LookupTable alt = build_alt(12);
  const LookupTable mlt = build_mlt(12);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    const FpValue x = random_normal(rng);
    const double a = seed_alt(alt, x).to_double();
    const double m = seed_direct(mlt, x).to_double();
    REQUIRE(std::abs(a / m - 1.0) < std::ldexp(1.0, -10));
  }
}
