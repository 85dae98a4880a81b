#pragma once

#include <optional>
#include <vector>

#include "rsqrt_lut/fixed_point.hpp"
#include "rsqrt_lut/fp_core.hpp"
#include "rsqrt_lut/seed_gen.hpp"

namespace rsqrt_lut {

inline constexpr int kDefaultMaxIter = 4;

/// Operand the iteration converges on: m for even exponents, 2m for odd ones.
FixedPoint nr_operand(const FpValue& x, int fraction_bits = kDefaultFractionBits);

/// One step of x' = x * (3 - a*x^2) / 2 at x.fraction_bits, every product truncated.
/// Returns nullopt when 3 - a*x^2 <= 0, i.e. the next iterate would not be positive.
std::optional<FixedPoint> nr_step(const FixedPoint& a, const FixedPoint& x);

struct IterateOptions {
  int max_iter = kDefaultMaxIter;
  double target_ulps = 1.0;
  // Keep stepping (without counting) until at least this many iterations are recorded.
  int record_through = 0;
  int fraction_bits = kDefaultFractionBits;
};

struct IterationTrace {
  std::vector<double> error_exponents;  // one per completed step
  std::vector<UlpError> step_errors;    // same steps, in ULPs
  std::optional<int> iterations_to_converge;
  bool diverged = false;
  UlpError final_ulp;
  FixedPoint final_value;  // mantissa-domain iterate, scaled by 2^result_exponent
  int result_exponent = 0;
};

IterationTrace iterate(const FixedPoint& a, const Seed& x0, const FpValue& x_input,
                       const IterateOptions& options = {});

/// Seeds from `table` and iterates; the usual entry point.
IterationTrace evaluate_sample(const LookupTable& table, const FpValue& x,
                               const IterateOptions& options = {});

}  // namespace rsqrt_lut
