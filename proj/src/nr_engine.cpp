#include "rsqrt_lut/nr_engine.hpp"

#include <algorithm>

#include "rsqrt_lut/errors.hpp"

namespace rsqrt_lut {

FixedPoint nr_operand(const FpValue& x, int fraction_bits) {
  // significand has 23 fraction bits; doubling it is the same integer with 22.
  const int bits = (x.exponent & 1) ? kMantissaBits - 1 : kMantissaBits;
  return FixedPoint{x.significand(), bits}.rescaled(fraction_bits);
}

std::optional<FixedPoint> nr_step(const FixedPoint& a, const FixedPoint& x) {
  const int g = x.fraction_bits;
  const FixedPoint square = mul_trunc(x, x, g);
  const FixedPoint p = mul_trunc(a, square, g);
  const std::uint64_t three = std::uint64_t{3} << g;
  if (p.value >= three) return std::nullopt;
  const FixedPoint q{three - p.value, g};
  const FixedPoint r = mul_trunc(x, q, g);
  return FixedPoint{r.value >> 1, g};
}

IterationTrace iterate(const FixedPoint& a, const Seed& x0, const FpValue& x_input,
                       const IterateOptions& options) {
  if (options.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (options.fraction_bits < kMinFractionBits || options.fraction_bits > kMaxFractionBits) {
    throw ConfigError("fraction bits must lie in [24, 60]");
  }
  const int g = options.fraction_bits;
  const ExactScaled ref = ref_rsqrt(x_input);
  const FixedPoint operand = a.rescaled(g);

  IterationTrace trace;
  trace.result_exponent = x0.result_exponent;
  FixedPoint x = x0.mantissa_part.rescaled(g);
  trace.final_value = x;
  const int last = std::max(options.max_iter, options.record_through);

  for (int n = 1; n <= last; ++n) {
    const bool converged = trace.iterations_to_converge.has_value();
    if (converged && n > options.record_through) break;
    if (!converged && n > options.max_iter) break;

    const auto next = nr_step(operand, x);
    if (!next) break;
    x = *next;
    const UlpError err = ulp_error(x, x0.result_exponent, ref);
    trace.step_errors.push_back(err);
    trace.error_exponents.push_back(error_exponent(err));
    if (!converged) {
      trace.final_ulp = err;
      trace.final_value = x;
      if (err.ulps < options.target_ulps) trace.iterations_to_converge = n;
    }
  }
  trace.diverged = !trace.iterations_to_converge.has_value();
  return trace;
}

IterationTrace evaluate_sample(const LookupTable& table, const FpValue& x,
                               const IterateOptions& options) {
  return iterate(nr_operand(x, options.fraction_bits), make_seed(table, x), x, options);
}

}  // namespace rsqrt_lut
