#include "rsqrt_lut/cli.hpp"

#include <CLI11.hpp>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rsqrt_lut/errors.hpp"
#include "rsqrt_lut/fp_core.hpp"
#include "rsqrt_lut/lut_builder.hpp"
#include "rsqrt_lut/nr_engine.hpp"
#include "rsqrt_lut/seed_gen.hpp"
#include "rsqrt_lut/sim_harness.hpp"

namespace rsqrt_lut::cli {

namespace {

struct TableOptions {
  std::string kind = "mlt";
  int addr_bits = 11;
  int word_bits = 0;
  int interp = 1;
  bool compressed = false;
  std::string table_file;

  TableSpec spec() const {
    TableSpec s;
    s.kind = parse_table_kind(kind);
    s.addr_bits = addr_bits;
    s.word_bits = word_bits != 0 ? word_bits : (s.kind == TableKind::kMain ? kMltWordBits : kAltWordBits);
    s.interp_factor = interp;
    s.compressed = compressed;
    s.validate();
    return s;
  }
};

void add_table_options(CLI::App* cmd, TableOptions& t, bool single_addr = true) {
  cmd->add_option("--kind", t.kind, "Table kind: mlt (main) or alt (auxiliary)")
      ->check(CLI::IsMember({"mlt", "alt"}))
      ->capture_default_str();
  if (single_addr) {
    cmd->add_option("--addr-bits", t.addr_bits, "Address bits k (4-16 for MLT, 6-16 for ALT)")
        ->capture_default_str();
  }
  cmd->add_option("--word-bits", t.word_bits, "Word width; 0 selects 23 (MLT) or 25 (ALT)")
      ->capture_default_str();
  if (single_addr) {
    cmd->add_option("--interp", t.interp, "Interpolation factor F (power of two, 1-64)")
        ->capture_default_str();
  }
  cmd->add_flag("--compressed", t.compressed, "Trim the three leading bits of MLT words");
}

struct EngineOptions {
  int fraction_bits = kDefaultFractionBits;
  int max_iter = kDefaultMaxIter;

  EngineConfig config() const {
    if (fraction_bits < kMinFractionBits || fraction_bits > kMaxFractionBits) {
      throw ConfigError("--fraction-bits must lie in [24, 60]");
    }
    if (max_iter < 1) throw ConfigError("--max-iter must be at least 1");
    return {fraction_bits, max_iter};
  }
};

void add_engine_options(CLI::App* cmd, EngineOptions& e) {
  cmd->add_option("--fraction-bits", e.fraction_bits, "Fixed-point fraction bits g of the NR datapath")
      ->capture_default_str();
  cmd->add_option("--max-iter", e.max_iter, "Iteration cap before a sample counts as diverged")
      ->capture_default_str();
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

std::string real(double v, const char* fmt = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// Decimal float or 0x-prefixed binary32 bit pattern.
std::uint32_t parse_float_bits(const std::string& text) {
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    std::uint32_t bits = 0;
    const char* first = text.data() + 2;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, bits, 16);
    if (ec != std::errc() || ptr != last) throw ConfigError("bad bit pattern '" + text + "'");
    return bits;
  }
  char* end = nullptr;
  const float f = std::strtof(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("bad float '" + text + "'");
  }
  return std::bit_cast<std::uint32_t>(f);
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << data)) throw FormatError("cannot write " + path);
}

LookupTable load_or_build(const TableOptions& t) {
  if (!t.table_file.empty()) return read_table_file(t.table_file);
  return build_table(t.spec());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reciprocal square root via lookup-table seeded Newton-Raphson"};
  app.name(args.empty() ? "rsqrt-lut" : args.front());
  app.require_subcommand(1);

  // gen
  TableOptions gen_table;
  std::string gen_out;
  std::string gen_format = "bin";
  auto* gen = app.add_subcommand("gen", "Generate a lookup table file");
  add_table_options(gen, gen_table);
  gen->add_option("--out-file", gen_out, "Destination path ('-' for stdout, csv only)")->required();
  gen->add_option("--format", gen_format, "bin (RSQT table file) or csv")
      ->check(CLI::IsMember({"bin", "csv"}))
      ->capture_default_str();

  // eval
  TableOptions eval_table;
  EngineOptions eval_engine;
  std::string eval_x;
  auto* eval = app.add_subcommand("eval", "Seed and iterate a single input");
  eval->add_option("--x", eval_x, "Input as a decimal float or a 0x-prefixed bit pattern")->required();
  add_table_options(eval, eval_table);
  eval->add_option("--table-file", eval_table.table_file, "Use a saved table instead of building one");
  add_engine_options(eval, eval_engine);

  // sweep
  TableOptions sweep_table;
  EngineOptions sweep_engine;
  std::vector<int> sweep_addr{11};
  std::vector<int> sweep_interp{1};
  std::uint64_t sweep_seed = kDefaultPrngSeed;
  std::size_t sweep_samples = kDefaultSampleCount;
  std::string sweep_out;
  auto* sw = app.add_subcommand("sweep", "Evaluate a cross product of table configurations as CSV");
  add_table_options(sw, sweep_table, false);
  sw->add_option("--addr-bits", sweep_addr, "Comma-separated address widths")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--interp", sweep_interp, "Comma-separated interpolation factors")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--samples", sweep_samples, "Corpus size")->capture_default_str();
  sw->add_option("--prng-seed", sweep_seed, "splitmix64 seed for the corpus")->capture_default_str();
  add_engine_options(sw, sweep_engine);
  sw->add_option("--out-file", sweep_out, "CSV destination (default stdout)");

  // verify-bits
  std::string vb_file;
  int vb_addr = 11;
  std::optional<std::uint32_t> vb_t2;
  std::optional<std::uint32_t> vb_t3;
  std::uint32_t vb_tol = 1;
  auto* vb = app.add_subcommand("verify-bits", "Report the MLT bit-pattern thresholds used by word trimming");
  vb->add_option("--table-file", vb_file, "MLT file to scan (otherwise build one)");
  vb->add_option("--addr-bits", vb_addr, "Address bits of the MLT to build")->capture_default_str();
  vb->add_option("--expect-t2", vb_t2, "Expected end of the second-bit prefix");
  vb->add_option("--expect-t3", vb_t3, "Expected end of the third-bit prefix");
  vb->add_option("--tolerance", vb_tol, "Allowed distance from the expected values")->capture_default_str();

  // report
  std::string rep_in = "-";
  std::string rep_layout = "all";
  std::string rep_out;
  auto* rep = app.add_subcommand("report", "Render markdown tables from sweep CSV");
  rep->add_option("--in-file", rep_in, "Sweep CSV ('-' for stdin)")->capture_default_str();
  rep->add_option("--layout", rep_layout, "table1, table2, table3 or all")
      ->check(CLI::IsMember({"table1", "table2", "table3", "all"}))
      ->capture_default_str();
  rep->add_option("--out-file", rep_out, "Markdown destination (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const TableSpec spec = gen_table.spec();
      const LookupTable table = build_table(spec);
      std::ostringstream buf;
      if (gen_format == "csv") {
        write_table_csv(table, buf);
      } else {
        if (gen_out == "-") throw ConfigError("binary tables need a file path");
        write_table(table, buf);
      }
      write_output(gen_out, buf.str(), out);
      if (gen_out != "-") {
        err << "wrote " << table.entries.size() << " entries (" << to_string(spec.kind) << ", k="
            << spec.addr_bits << ", F=" << spec.interp_factor << ") to " << gen_out << '\n';
      }
    } else if (*eval) {
      const EngineConfig engine = eval_engine.config();
      const std::uint32_t bits = parse_float_bits(eval_x);
      const LookupTable table = load_or_build(eval_table);
      const FpValue x = decompose(bits);
      const Seed seed = make_seed(table, x);
      IterateOptions opts;
      opts.max_iter = engine.max_iter;
      opts.fraction_bits = engine.fraction_bits;
      const IterationTrace trace = iterate(nr_operand(x, engine.fraction_bits), seed, x, opts);
      const ExactScaled ref = ref_rsqrt(x);

      out << "x          " << hex32(bits) << " (" << real(x.to_double()) << ")\n";
      out << "table      " << to_string(table.spec.kind) << " k=" << table.spec.addr_bits
          << " w=" << table.spec.word_bits << " F=" << table.spec.interp_factor
          << (table.spec.compressed ? " compressed" : "") << '\n';
      out << "address    " << table_address(x, table.spec.addr_bits) << '\n';
      const UlpError seed_err = ulp_error(seed.mantissa_part, seed.result_exponent, ref);
      out << "seed       " << real(seed.mantissa_part.to_double()) << " * 2^" << seed.result_exponent
          << " = " << real(seed.to_double()) << " (error exponent "
          << real(error_exponent(seed_err), "%.3f") << ")\n";
      out << "reference  " << real(ref.to_double(), "%.17g") << '\n';
      for (std::size_t i = 0; i < trace.error_exponents.size(); ++i) {
        out << "iter " << (i + 1) << "     error exponent " << real(trace.error_exponents[i], "%.3f")
            << " (" << real(trace.step_errors[i].ulps, "%.6g") << " ulp)\n";
      }
      const double result = std::ldexp(trace.final_value.to_double(), trace.result_exponent);
      out << "result     " << real(result, "%.17g") << '\n';
      out << "final ulp  " << real(trace.final_ulp.ulps, "%.6g") << '\n';
      if (trace.diverged) {
        out << "status     diverged\n";
      } else {
        out << "status     converged after " << *trace.iterations_to_converge << " iteration(s)\n";
      }
    } else if (*sw) {
      const EngineConfig engine = sweep_engine.config();
      TableOptions probe = sweep_table;
      for (int k : sweep_addr) {
        for (int f : sweep_interp) {
          probe.addr_bits = k;
          probe.interp = f;
          probe.spec();
        }
      }
      if (sweep_samples == 0) throw ConfigError("--samples must be at least 1");
      const TableSpec base = probe.spec();
      if (base.compressed) throw ConfigError("sweeps run on uncompressed tables");
      const Corpus corpus = gen_corpus(sweep_seed, sweep_samples);
      const auto records = sweep(base.kind, sweep_addr, sweep_interp, corpus, engine, base.word_bits);
      write_output(sweep_out, render_csv(records), out);
    } else if (*vb) {
      BitThresholds th;
      if (!vb_file.empty()) {
        const LookupTable t = read_table_file(vb_file);
        th = t.spec.compressed ? *t.thresholds : compute_thresholds(t);
      } else {
        TableSpec::mlt(vb_addr).validate();
        th = compute_thresholds(vb_addr);
      }
      out << "t2 = " << th.t2 << '\n';
      out << "t3 = " << th.t3 << '\n';
      bool ok = true;
      auto check = [&](const char* name, std::uint32_t got, std::optional<std::uint32_t> want) {
        if (!want) return;
        const std::uint32_t dist = got > *want ? got - *want : *want - got;
        const bool pass = dist <= vb_tol;
        out << name << " expected " << *want << " +/- " << vb_tol << ": " << (pass ? "ok" : "MISMATCH")
            << '\n';
        ok = ok && pass;
      };
      check("t2", th.t2, vb_t2);
      check("t3", th.t3, vb_t3);
      if (!ok) return kExitDomain;
    } else if (*rep) {
      std::vector<SweepRecord> records;
      if (rep_in == "-") {
        records = parse_csv(std::cin);
      } else {
        std::ifstream f(rep_in);
        if (!f) throw FormatError("cannot open " + rep_in);
        records = parse_csv(f);
      }
      if (records.empty()) throw FormatError("CSV has no data rows");
      std::string md;
      if (rep_layout == "all") {
        const bool any_full = std::any_of(records.begin(), records.end(),
                                          [](const auto& r) { return r.spec.interp_factor == 1; });
        const bool any_mlt = std::any_of(records.begin(), records.end(),
                                         [](const auto& r) { return r.spec.kind == TableKind::kMain; });
        if (any_full) md += render_markdown(records, ReportLayout::kTable1) + "\n";
        md += render_markdown(records, ReportLayout::kTable2);
        if (any_mlt) md += "\n" + render_markdown(records, ReportLayout::kTable3);
      } else {
        md = render_markdown(records, parse_layout(rep_layout));
      }
      write_output(rep_out, md, out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace rsqrt_lut::cli
