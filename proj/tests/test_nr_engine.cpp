#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rsqrt_lut/nr_engine.hpp"

using namespace rsqrt_lut;

namespace {

FpValue random_normal(std::mt19937_64& rng) {
  return decompose(static_cast<std::uint32_t>(((rng() % 254) + 1) << 23) |
                   static_cast<std::uint32_t>(rng() & 0x7FFFFF));
}

FixedPoint fx(double v, int g = 30) { return FixedPoint::from_double(v, g); }

}  // namespace

TEST_CASE("nr_step hand examples") {
  CHECK(nr_step(fx(1.0), fx(1.0))->to_double() == 1.0);
  CHECK(nr_step(fx(1.0), fx(0.5))->to_double() == 0.6875);
  CHECK_FALSE(nr_step(fx(1.0), fx(2.0)).has_value());
  // 3 - a*x^2 == 0 exactly: next iterate would be 0.
  CHECK_FALSE(nr_step(fx(3.0), fx(1.0)).has_value());
  CHECK(nr_step(fx(2.0), fx(1.0))->to_double() == 0.5);
}

TEST_CASE("nr_step signals divergence exactly when the next iterate is non-positive") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5000; ++i) {
    // Dyadic values with few bits make the step exact at g = 40.
    const double a = 1.0 + static_cast<double>(rng() % 4096) / 1024.0;
    const double x = static_cast<double>(rng() % 4096 + 1) / 1024.0;
    const long double next = static_cast<long double>(x) * (3.0L - a * x * x) / 2.0L;
    const auto got = nr_step(fx(a, 40), fx(x, 40));
    if (next <= 0) {
      REQUIRE_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      REQUIRE(static_cast<long double>(got->to_double()) == doctest::Approx(static_cast<double>(next)).epsilon(1e-9));
    }
  }
}

TEST_CASE("nr_operand") {
  CHECK(nr_operand(from_float(1.5f)).to_double() == 1.5);
  CHECK(nr_operand(from_float(3.0f)).to_double() == 3.0);  // 1.5 * 2^1 -> 2m
  CHECK(nr_operand(from_float(0.375f)).to_double() == 1.5);
}

TEST_CASE("quadratic convergence with wide arithmetic") {
  const int g = 56;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10000; ++i) {
    const FpValue x = random_normal(rng);
    const FixedPoint a = nr_operand(x, g);
    const long double r = 1.0L / std::sqrt(static_cast<long double>(a.to_double()));
    // Seed with a relative error below 0.25.
    const long double eps0 = (static_cast<long double>(rng() % 2000) - 1000.0L) / 4100.0L;
    FixedPoint xn = FixedPoint::from_double(static_cast<double>(r * (1.0L + eps0)), g);
    long double eps = std::fabs(static_cast<long double>(xn.to_double()) / r - 1.0L);
    const auto next = nr_step(a, xn);
    REQUIRE(next.has_value());
    const long double eps1 = std::fabs(static_cast<long double>(next->to_double()) / r - 1.0L);
    // Exact algebra: x' = r(1 - 1.5e^2 - 0.5e^3) for x = r(1 + e).
    REQUIRE(eps1 <= 1.5L * eps * eps + 0.5L * eps * eps * eps + std::ldexp(1.0L, -(g - 4)));
    // From below after the first step.
    REQUIRE(static_cast<long double>(next->to_double()) <= r * (1.0L + std::ldexp(1.0L, -(g - 4))));
  }
}

TEST_CASE("iterate: exact seed converges immediately") {
  const FpValue x = from_float(4.0f);
  const Seed exact{FixedPoint{1u << 26, kSeedFractionBits}, -1};
  const IterationTrace t = iterate(nr_operand(x), exact, x);
  REQUIRE(t.iterations_to_converge.has_value());
  CHECK(*t.iterations_to_converge == 1);
  CHECK_FALSE(t.diverged);
  CHECK(t.final_ulp.ulps < 1e-3);
}

TEST_CASE("iterate: 11-bit MLT seeds converge in one or two steps") {
  const LookupTable t = build_mlt(11);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    const FpValue x = random_normal(rng);
    const IterationTrace tr = evaluate_sample(t, x);
    REQUIRE_FALSE(tr.diverged);
    REQUIRE(*tr.iterations_to_converge >= 1);
    REQUIRE(*tr.iterations_to_converge <= 2);
    REQUIRE(tr.final_ulp.acceptable());
  }
}

TEST_CASE("iterate: bits double from a 64x6 seed") {
  const LookupTable t = build_mlt(6, 6);
  const FpValue x = from_float(1.1f);
  IterateOptions opts;
  opts.fraction_bits = 60;
  const IterationTrace tr = evaluate_sample(t, x, opts);
  REQUIRE(tr.error_exponents.size() == 3);
  CHECK(*tr.iterations_to_converge == 3);
  const Seed s = make_seed(t, x);
  const double e0 = error_exponent(ulp_error(s.mantissa_part, s.result_exponent, ref_rsqrt(x)));
  CHECK(e0 <= -4.0);
  CHECK(tr.error_exponents[0] <= 2 * e0 + 1);
  CHECK(tr.error_exponents[1] <= 2 * tr.error_exponents[0] + 1);
  CHECK(tr.error_exponents[2] <= 2 * tr.error_exponents[1] + 1);
  CHECK(tr.error_exponents[2] < -23.0);
}

TEST_CASE("iterate: cap and divergence bookkeeping") {
  const FpValue x = from_float(1.0f);
  const FixedPoint a = nr_operand(x);
  // Seed far too large: 3 - x^2 < 0 on the first step.
  const IterationTrace bad = iterate(a, Seed{FixedPoint{std::uint64_t{2} << 26, 26}, 0}, x);
  CHECK(bad.diverged);
  CHECK(bad.error_exponents.empty());

  IterateOptions one;
  one.max_iter = 1;
  const IterationTrace slow = iterate(a, Seed{FixedPoint{1u << 24, 26}, 0}, x, one);
  CHECK(slow.diverged);
  CHECK(slow.error_exponents.size() == 1);

  IterateOptions keep;
  keep.record_through = 3;
  const IterationTrace booked = iterate(a, Seed{FixedPoint{(1u << 26) - 1, 26}, 0}, x, keep);
  CHECK(*booked.iterations_to_converge == 1);
  CHECK(booked.error_exponents.size() == 3);

  IterateOptions none;
  none.max_iter = 0;
  CHECK_THROWS_AS(iterate(a, Seed{}, x, none), ConfigError);
}

TEST_CASE("iterate is deterministic") {
  const LookupTable t = reduce(build_alt(10), 8);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const FpValue x = random_normal(rng);
    const IterationTrace a = evaluate_sample(t, x);
    const IterationTrace b = evaluate_sample(t, x);
    REQUIRE(a.error_exponents == b.error_exponents);
    REQUIRE(a.final_value == b.final_value);
  }
}
