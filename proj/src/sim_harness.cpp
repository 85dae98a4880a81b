#include "rsqrt_lut/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "rsqrt_lut/errors.hpp"

namespace rsqrt_lut {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint32_t sample_bits(std::uint64_t prng_output) {
  const std::uint64_t high = prng_output >> 32;
  const auto exp_field = static_cast<std::uint32_t>(1 + ((high * 254) >> 32));
  const auto fraction = static_cast<std::uint32_t>(prng_output) & ((1u << kMantissaBits) - 1);
  return (exp_field << kMantissaBits) | fraction;
}

Corpus gen_corpus(std::uint64_t prng_seed, std::size_t count) {
  if (count == 0) throw ConfigError("corpus needs at least one sample");
  Corpus c{prng_seed, count, {}};
  c.samples.reserve(count);
  SplitMix64 rng(prng_seed);
  for (std::size_t i = 0; i < count; ++i) c.samples.push_back(decompose(sample_bits(rng.next())));
  return c;
}

std::vector<IterationTrace> trace_config(const LookupTable& table, const Corpus& corpus,
                                         const EngineConfig& engine) {
  IterateOptions opts;
  opts.max_iter = engine.max_iter;
  opts.fraction_bits = engine.fraction_bits;
  opts.record_through = 2;
  std::vector<IterationTrace> traces;
  traces.reserve(corpus.samples.size());
  for (const FpValue& x : corpus.samples) traces.push_back(evaluate_sample(table, x, opts));
  return traces;
}

SweepRecord summarize(const TableSpec& spec, const Corpus& corpus, const EngineConfig& engine,
                      const std::vector<IterationTrace>& traces) {
  SweepRecord rec;
  rec.spec = spec;
  rec.prng_seed = corpus.prng_seed;
  rec.samples = traces.size();
  rec.fraction_bits = engine.fraction_bits;

  double exp_sum[2] = {0.0, 0.0};
  std::size_t exp_count[2] = {0, 0};
  bool acceptable[2] = {true, true};
  std::size_t diverged = 0;
  std::size_t converged = 0;
  double iter_sum = 0.0;

  for (const IterationTrace& t : traces) {
    if (t.diverged) {
      ++diverged;
      continue;
    }
    ++converged;
    iter_sum += *t.iterations_to_converge;
    for (int n = 0; n < 2; ++n) {
      if (t.step_errors.size() <= static_cast<std::size_t>(n)) {
        acceptable[n] = false;
        continue;
      }
      exp_sum[n] += std::max(t.error_exponents[n], kErrorExponentFloor);
      ++exp_count[n];
      if (!t.step_errors[n].acceptable()) acceptable[n] = false;
    }
  }
  const double nan = std::nan("");
  rec.avg_error_exp_iter1 = exp_count[0] ? exp_sum[0] / exp_count[0] : nan;
  rec.avg_error_exp_iter2 = exp_count[1] ? exp_sum[1] / exp_count[1] : nan;
  rec.divergence_pct = traces.empty() ? 0.0 : 100.0 * diverged / traces.size();
  rec.avg_iterations = converged ? iter_sum / converged : nan;
  rec.acceptable_after_1 = converged > 0 && acceptable[0];
  rec.acceptable_after_2 = converged > 0 && acceptable[1];
  return rec;
}

SweepRecord evaluate_config(const LookupTable& table, const Corpus& corpus,
                            const EngineConfig& engine) {
  return summarize(table.spec, corpus, engine, trace_config(table, corpus, engine));
}

SweepRecord evaluate_config(const TableSpec& spec, const Corpus& corpus,
                            const EngineConfig& engine) {
  return evaluate_config(build_table(spec), corpus, engine);
}

std::vector<SweepRecord> sweep(TableKind kind, std::vector<int> addr_bits_list,
                               std::vector<int> interp_list, const Corpus& corpus,
                               const EngineConfig& engine, int word_bits) {
  if (addr_bits_list.empty() || interp_list.empty()) {
    throw ConfigError("sweep needs at least one address width and one interpolation factor");
  }
  std::sort(addr_bits_list.begin(), addr_bits_list.end());
  std::sort(interp_list.begin(), interp_list.end());
  if (word_bits == 0) word_bits = kind == TableKind::kMain ? kMltWordBits : kAltWordBits;

  std::vector<SweepRecord> out;
  for (int k : addr_bits_list) {
    TableSpec base{kind, k, word_bits, 1, false};
    base.validate();
    for (int f : interp_list) {
      TableSpec s = base;
      s.interp_factor = f;
      s.validate();
    }
    const LookupTable full = build_table(base);
    for (int f : interp_list) {
      out.push_back(evaluate_config(reduce(full, f), corpus, engine));
    }
  }
  return out;
}

// --- CSV -------------------------------------------------------------------

namespace {

constexpr const char* kCsvHeader =
    "kind,addr_bits,word_bits,interp_factor,samples,prng_seed,g,avg_error_exp_iter1,"
    "avg_error_exp_iter2,divergence_pct,avg_iterations,acceptable_after_1,acceptable_after_2";

std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* field) {
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(s, &used);
    } else {
      v = static_cast<T>(std::stoull(s, &used));
    }
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(std::string("bad value '") + s + "' in CSV column " + field);
  }
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw FormatError("bad boolean '" + s + "' in CSV");
}

}  // namespace

std::string render_csv(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw ConfigError("no records to render");
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRecord& r : records) {
    out += to_string(r.spec.kind);
    out += ',' + std::to_string(r.spec.addr_bits);
    out += ',' + std::to_string(r.spec.word_bits);
    out += ',' + std::to_string(r.spec.interp_factor);
    out += ',' + std::to_string(r.samples);
    out += ',' + std::to_string(r.prng_seed);
    out += ',' + std::to_string(r.fraction_bits);
    out += ',' + fmt_real(r.avg_error_exp_iter1);
    out += ',' + fmt_real(r.avg_error_exp_iter2);
    out += ',' + fmt_real(r.divergence_pct);
    out += ',' + fmt_real(r.avg_iterations);
    out += r.acceptable_after_1 ? ",true" : ",false";
    out += r.acceptable_after_2 ? ",true" : ",false";
    out += '\n';
  }
  return out;
}

std::vector<SweepRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw FormatError("CSV header does not match the sweep column layout");
  }
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 13) {
      throw FormatError("CSV row has " + std::to_string(cells.size()) + " columns, expected 13");
    }
    SweepRecord r;
    try {
      r.spec.kind = parse_table_kind(cells[0]);
    } catch (const ConfigError& e) {
      throw FormatError(e.what());
    }
    r.spec.addr_bits = parse_number<int>(cells[1], "addr_bits");
    r.spec.word_bits = parse_number<int>(cells[2], "word_bits");
    r.spec.interp_factor = parse_number<int>(cells[3], "interp_factor");
    r.samples = parse_number<std::size_t>(cells[4], "samples");
    r.prng_seed = parse_number<std::uint64_t>(cells[5], "prng_seed");
    r.fraction_bits = parse_number<int>(cells[6], "g");
    r.avg_error_exp_iter1 = parse_number<double>(cells[7], "avg_error_exp_iter1");
    r.avg_error_exp_iter2 = parse_number<double>(cells[8], "avg_error_exp_iter2");
    r.divergence_pct = parse_number<double>(cells[9], "divergence_pct");
    r.avg_iterations = parse_number<double>(cells[10], "avg_iterations");
    r.acceptable_after_1 = parse_bool(cells[11]);
    r.acceptable_after_2 = parse_bool(cells[12]);
    out.push_back(r);
  }
  return out;
}

// --- markdown --------------------------------------------------------------

ReportLayout parse_layout(const std::string& text) {
  if (text == "table1") return ReportLayout::kTable1;
  if (text == "table2") return ReportLayout::kTable2;
  if (text == "table3") return ReportLayout::kTable3;
  throw ConfigError("unknown report layout '" + text + "' (expected table1, table2 or table3)");
}

namespace {

const char* verdict(bool ok) { return ok ? "Acceptable" : "Unacceptable"; }

std::string fmt_pct(double pct) {
  if (pct == 0.0) return "None";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", pct);
  return buf;
}

std::string fmt_iters(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string table_name(const SweepRecord& r) {
  return std::to_string(r.spec.full_size()) + "x" + std::to_string(r.spec.word_bits) + " " +
         (r.spec.kind == TableKind::kMain ? "MLT" : "ALT");
}

struct Grid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::string out = "|";
    for (const auto& h : header) out += " " + h + " |";
    out += "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) out += "---|";
    out += '\n';
    for (const auto& row : rows) {
      out += "|";
      for (const auto& c : row) out += " " + c + " |";
      out += '\n';
    }
    return out;
  }
};

std::string render_table1(std::vector<SweepRecord> recs) {
  std::erase_if(recs, [](const SweepRecord& r) { return r.spec.interp_factor != 1; });
  if (recs.empty()) throw ConfigError("table1 layout needs records with interpolation factor 1");
  std::stable_sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
    return a.spec.addr_bits < b.spec.addr_bits;
  });
  Grid g;
  g.header = {"# of address bits"};
  std::vector<std::string> err{"Error"}, div{"Divergence"}, it{"Average # of iterations"};
  for (const auto& r : recs) {
    g.header.push_back(std::to_string(r.spec.addr_bits));
    err.push_back(verdict(r.acceptable_after_2));
    div.push_back(fmt_pct(r.divergence_pct));
    it.push_back(fmt_iters(r.avg_iterations));
  }
  g.rows = {err, div, it};
  return "### " + std::string(recs.front().spec.kind == TableKind::kMain ? "MLT" : "ALT") +
         " by address width (" + std::to_string(recs.front().spec.word_bits) +
         "-bit words, no interpolation)\n\n" + g.render();
}

std::string render_table2(std::vector<SweepRecord> recs) {
  const SweepRecord first = recs.front();
  std::erase_if(recs, [&](const SweepRecord& r) {
    return r.spec.kind != first.spec.kind || r.spec.addr_bits != first.spec.addr_bits;
  });
  std::stable_sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
    return a.spec.interp_factor < b.spec.interp_factor;
  });
  Grid g;
  g.header = {"Interpolation factor"};
  std::vector<std::string> e1{"Error after 1st iteration"}, e2{"Error after 2nd iteration"},
      div{"Divergence"}, it{"# of iterations"};
  for (const auto& r : recs) {
    g.header.push_back(std::to_string(r.spec.interp_factor));
    e1.push_back(verdict(r.acceptable_after_1));
    e2.push_back(verdict(r.acceptable_after_2));
    div.push_back(fmt_pct(r.divergence_pct));
    it.push_back(fmt_iters(r.avg_iterations));
  }
  g.rows = {e1, e2, div, it};
  return "### " + table_name(first) + " by interpolation factor\n\n" + g.render();
}

std::string render_table3(const std::vector<SweepRecord>& recs) {
  std::set<int> factors;
  std::map<int, std::map<int, SweepRecord>, std::greater<>> by_width;
  for (const auto& r : recs) {
    if (r.spec.kind != TableKind::kMain) continue;
    factors.insert(r.spec.interp_factor);
    by_width[r.spec.addr_bits].emplace(r.spec.interp_factor, r);
  }
  if (by_width.empty()) throw ConfigError("table3 layout needs MLT records");
  Grid g;
  g.header = {"Interpolation factor"};
  for (int f : factors) g.header.push_back(std::to_string(f));
  for (const auto& [k, cells] : by_width) {
    const std::string label = std::to_string(k) + "-bit MLT";
    std::vector<std::string> err{"Final error, " + label}, it{"Number of iterations, " + label},
        div{"Divergence, " + label};
    for (int f : factors) {
      const auto found = cells.find(f);
      if (found == cells.end()) {
        err.push_back("-");
        it.push_back("-");
        div.push_back("-");
        continue;
      }
      err.push_back(verdict(found->second.acceptable_after_2));
      it.push_back(fmt_iters(found->second.avg_iterations));
      div.push_back(fmt_pct(found->second.divergence_pct));
    }
    g.rows.push_back(err);
    g.rows.push_back(it);
    g.rows.push_back(div);
  }
  return "### MLTs by interpolation factor\n\n" + g.render();
}

}  // namespace

std::string render_markdown(const std::vector<SweepRecord>& records, ReportLayout layout) {
  if (records.empty()) throw ConfigError("no records to render");
  switch (layout) {
    case ReportLayout::kTable1: return render_table1(records);
    case ReportLayout::kTable2: return render_table2(records);
    case ReportLayout::kTable3: return render_table3(records);
  }
  throw ConfigError("unknown layout");
}

}  // namespace rsqrt_lut
