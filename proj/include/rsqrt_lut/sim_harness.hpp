#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsqrt_lut/fp_core.hpp"
#include "rsqrt_lut/lut_builder.hpp"
#include "rsqrt_lut/nr_engine.hpp"

namespace rsqrt_lut {

inline constexpr std::uint64_t kDefaultPrngSeed = 42;
inline constexpr std::size_t kDefaultSampleCount = 10000;

/// Error exponents are averaged with exact results pinned here, just below what the
/// 64-bit oracle can resolve.
inline constexpr double kErrorExponentFloor = -64.0;

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// Positive normal bit pattern from one PRNG output: the exponent field is drawn from
/// [1, 254] by a multiply-shift of the high 32 bits, the fraction is the low 23 bits.
std::uint32_t sample_bits(std::uint64_t prng_output);

struct Corpus {
  std::uint64_t prng_seed = kDefaultPrngSeed;
  std::size_t count = 0;
  std::vector<FpValue> samples;
};

Corpus gen_corpus(std::uint64_t prng_seed, std::size_t count);

struct EngineConfig {
  int fraction_bits = kDefaultFractionBits;
  int max_iter = kDefaultMaxIter;
};

struct SweepRecord {
  TableSpec spec;
  std::uint64_t prng_seed = 0;
  std::size_t samples = 0;
  int fraction_bits = kDefaultFractionBits;
  double avg_error_exp_iter1 = 0.0;
  double avg_error_exp_iter2 = 0.0;
  double divergence_pct = 0.0;
  double avg_iterations = 0.0;
  bool acceptable_after_1 = false;
  bool acceptable_after_2 = false;
};

/// Per-sample traces, recorded through at least two iterations.
std::vector<IterationTrace> trace_config(const LookupTable& table, const Corpus& corpus,
                                         const EngineConfig& engine);

SweepRecord summarize(const TableSpec& spec, const Corpus& corpus, const EngineConfig& engine,
                      const std::vector<IterationTrace>& traces);

SweepRecord evaluate_config(const TableSpec& spec, const Corpus& corpus,
                            const EngineConfig& engine = {});
SweepRecord evaluate_config(const LookupTable& table, const Corpus& corpus,
                            const EngineConfig& engine = {});

/// Cross product, ordered by (addr_bits, interp_factor). word_bits = 0 picks the kind's default.
std::vector<SweepRecord> sweep(TableKind kind, std::vector<int> addr_bits_list,
                               std::vector<int> interp_list, const Corpus& corpus,
                               const EngineConfig& engine = {}, int word_bits = 0);

std::string render_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_csv(std::istream& in);

enum class ReportLayout { kTable1, kTable2, kTable3 };
ReportLayout parse_layout(const std::string& text);

std::string render_markdown(const std::vector<SweepRecord>& records, ReportLayout layout);

}  // namespace rsqrt_lut
