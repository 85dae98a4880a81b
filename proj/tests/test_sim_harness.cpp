#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rsqrt_lut/sim_harness.hpp"

using namespace rsqrt_lut;

TEST_CASE("splitmix64 and corpus golden values for seed 42") {
  // Frozen from an independent Python implementation of the recurrence.
  SplitMix64 rng(42);
  CHECK(rng.next() == 0xBDD732262FEB6E95ull);
  CHECK(rng.next() == 0x28EFE333B266F103ull);
  CHECK(rng.next() == 0x47526757130F9F52ull);

  const Corpus c = gen_corpus(42, 3);
  REQUIRE(c.samples.size() == 3);
  CHECK(compose(c.samples[0]) == 0x5EEB6E95u);
  CHECK(compose(c.samples[1]) == 0x14E6F103u);
  CHECK(compose(c.samples[2]) == 0x238F9F52u);
}

TEST_CASE("sample_bits covers the exponent field range") {
  CHECK(sample_bits(0) == (1u << 23));
  CHECK((sample_bits(~0ull) >> 23) == 254u);
  CHECK((sample_bits(~0ull) & 0x7FFFFFu) == 0x7FFFFFu);
}

TEST_CASE("gen_corpus is deterministic and positive normal") {
  const Corpus a = gen_corpus(7, 5000);
  const Corpus b = gen_corpus(7, 5000);
  CHECK(a.samples == b.samples);
  for (const FpValue& x : a.samples) {
    REQUIRE(classify(compose(x)) == FloatClass::kPositiveNormal);
  }
  CHECK(gen_corpus(8, 10).samples != gen_corpus(7, 10).samples);
  CHECK_THROWS_AS(gen_corpus(1, 0), ConfigError);
}

TEST_CASE("summarize aggregates traces") {
  auto trace = [](std::optional<int> iters, std::vector<double> ulps) {
    IterationTrace t;
    t.iterations_to_converge = iters;
    t.diverged = !iters;
    for (double u : ulps) {
      t.step_errors.push_back({u});
      t.error_exponents.push_back(error_exponent({u}));
    }
    return t;
  };
  const std::vector<IterationTrace> traces = {
      trace(1, {0.5, 0.25}),
      trace(2, {4.0, 0.5}),
      trace(std::nullopt, {1e6, 1e5, 1e4, 1e3}),
      trace(1, {0.0, 0.0}),
  };
  const Corpus c{1, 4, {}};
  const SweepRecord r = summarize(TableSpec::mlt(11), c, {}, traces);
  CHECK(r.divergence_pct == 25.0);
  CHECK(r.avg_iterations == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(r.acceptable_after_1);
  CHECK(r.acceptable_after_2);
  // Exact results enter the average at the floor.
  CHECK(r.avg_error_exp_iter1 == doctest::Approx((-24.0 - 21.0 + kErrorExponentFloor) / 3.0));
  CHECK(r.avg_error_exp_iter2 == doctest::Approx((-25.0 - 24.0 + kErrorExponentFloor) / 3.0));

  const SweepRecord none = summarize(TableSpec::mlt(11), c, {}, {trace(std::nullopt, {9.0})});
  CHECK(none.divergence_pct == 100.0);
  CHECK(std::isnan(none.avg_iterations));
  CHECK_FALSE(none.acceptable_after_1);
}

TEST_CASE("evaluate_config on the 12-bit ALT") {
  const Corpus c = gen_corpus(42, 2000);
  const SweepRecord r = evaluate_config(TableSpec::alt(12), c);
  CHECK(r.samples == 2000);
  CHECK(r.divergence_pct <= 0.1);
  CHECK(r.avg_iterations <= 1.1);
  CHECK(r.acceptable_after_2);
  CHECK(r.avg_error_exp_iter2 <= r.avg_error_exp_iter1);
}

TEST_CASE("sweep ordering and degenerate case") {
  const Corpus c = gen_corpus(3, 300);
  const auto recs = sweep(TableKind::kMain, {12, 11}, {4, 2}, c);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].spec.addr_bits == 11);
  CHECK(recs[0].spec.interp_factor == 2);
  CHECK(recs[1].spec.interp_factor == 4);
  CHECK(recs[3].spec.addr_bits == 12);

  const auto single = sweep(TableKind::kAuxiliary, {8}, {4}, c);
  REQUIRE(single.size() == 1);
  TableSpec s = TableSpec::alt(8);
  s.interp_factor = 4;
  const SweepRecord direct = evaluate_config(s, c);
  CHECK(render_csv(single) == render_csv({direct}));

  CHECK_THROWS_AS(sweep(TableKind::kMain, {}, {1}, c), ConfigError);
  CHECK_THROWS_AS(sweep(TableKind::kMain, {4}, {32}, c), ConfigError);
}

TEST_CASE("metric sanity and address-width trend") {
  const Corpus c = gen_corpus(42, 2000);
  const auto recs = sweep(TableKind::kAuxiliary, {6, 8, 10, 12, 14, 16}, {1}, c);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    CHECK(r.divergence_pct >= 0.0);
    CHECK(r.divergence_pct <= 100.0);
    CHECK(r.avg_iterations >= 1.0);
    CHECK(r.avg_iterations <= kDefaultMaxIter);
    CHECK(r.avg_error_exp_iter2 <= r.avg_error_exp_iter1);
    if (i > 0) CHECK(r.avg_iterations <= recs[i - 1].avg_iterations);
  }
}

TEST_CASE("CSV rendering") {
  const Corpus c = gen_corpus(42, 200);
  const auto recs = sweep(TableKind::kMain, {11}, {1, 2}, c);
  const std::string csv = render_csv(recs);
  CHECK(csv == render_csv(sweep(TableKind::kMain, {11}, {1, 2}, c)));
  CHECK(csv.rfind("kind,addr_bits,word_bits,interp_factor,samples,prng_seed,g,avg_error_exp_iter1,"
                  "avg_error_exp_iter2,divergence_pct,avg_iterations,acceptable_after_1,"
                  "acceptable_after_2\n",
                  0) == 0);
  CHECK(csv.find("\nmlt,11,23,2,200,42,30,") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK_THROWS_AS(render_csv({}), ConfigError);

  std::istringstream in(csv);
  const auto back = parse_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(render_csv(back) == csv);

  std::istringstream bad("nope\n");
  CHECK_THROWS_AS(parse_csv(bad), FormatError);
  std::istringstream short_row(csv.substr(0, csv.find('\n') + 1) + "mlt,11\n");
  CHECK_THROWS_AS(parse_csv(short_row), FormatError);
}

TEST_CASE("markdown layouts") {
  SweepRecord r;
  r.spec = TableSpec::alt(12);
  r.spec.interp_factor = 2;
  r.acceptable_after_1 = true;
  r.acceptable_after_2 = true;
  r.divergence_pct = 0.12;
  r.avg_iterations = 1.2;
  SweepRecord r4 = r;
  r4.spec.interp_factor = 4;
  r4.acceptable_after_1 = false;

  const std::string t2 = render_markdown({r4, r}, ReportLayout::kTable2);
  CHECK(t2.find("| Interpolation factor | 2 | 4 |") != std::string::npos);
  CHECK(t2.find("| Error after 1st iteration | Acceptable | Unacceptable |") != std::string::npos);
  CHECK(t2.find("| Divergence | 0.12% | 0.12% |") != std::string::npos);
  CHECK(t2.find("| # of iterations | 1.200 | 1.200 |") != std::string::npos);

  SweepRecord full = r;
  full.spec.interp_factor = 1;
  full.divergence_pct = 0.0;
  const std::string t1 = render_markdown({full}, ReportLayout::kTable1);
  CHECK(t1.find("| Divergence | None |") != std::string::npos);
  CHECK_THROWS_AS(render_markdown({r}, ReportLayout::kTable1), ConfigError);

  SweepRecord m = r;
  m.spec = TableSpec::mlt(11);
  m.spec.interp_factor = 2;
  const std::string t3 = render_markdown({m, r}, ReportLayout::kTable3);
  CHECK(t3.find("Number of iterations, 11-bit MLT | 1.200 |") != std::string::npos);
  CHECK_THROWS_AS(render_markdown({r}, ReportLayout::kTable3), ConfigError);
  CHECK_THROWS_AS(render_markdown({}, ReportLayout::kTable2), ConfigError);
}
