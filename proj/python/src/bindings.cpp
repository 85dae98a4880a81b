#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rsqrt_lut/errors.hpp"
#include "rsqrt_lut/fixed_point.hpp"
#include "rsqrt_lut/fp_core.hpp"
#include "rsqrt_lut/lut_builder.hpp"
#include "rsqrt_lut/nr_engine.hpp"
#include "rsqrt_lut/seed_gen.hpp"
#include "rsqrt_lut/sim_harness.hpp"

namespace py = pybind11;
using namespace rsqrt_lut;

namespace {

std::vector<SweepRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lookup-table seeded Newton-Raphson reciprocal square root";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<FixedPoint>(m, "FixedPoint")
      .def(py::init<>())
      .def(py::init([](std::uint64_t value, int fraction_bits) { return FixedPoint{value, fraction_bits}; }),
           py::arg("value"), py::arg("fraction_bits") = kDefaultFractionBits)
      .def_readwrite("value", &FixedPoint::value)
      .def_readwrite("fraction_bits", &FixedPoint::fraction_bits)
      .def_static("from_double", &FixedPoint::from_double, py::arg("v"),
                  py::arg("fraction_bits") = kDefaultFractionBits)
      .def("to_double", &FixedPoint::to_double)
      .def("__float__", &FixedPoint::to_double)
      .def("__repr__", [](const FixedPoint& f) {
        return "FixedPoint(" + std::to_string(f.value) + ", " + std::to_string(f.fraction_bits) + ")";
      });

  py::class_<FpValue>(m, "FpValue")
      .def(py::init<>())
      .def(py::init([](std::uint32_t sign, int exponent, std::uint32_t fraction) {
             return FpValue{sign, exponent, fraction};
           }),
           py::arg("sign"), py::arg("exponent"), py::arg("fraction"))
      .def_readwrite("sign", &FpValue::sign)
      .def_readwrite("exponent", &FpValue::exponent)
      .def_readwrite("fraction", &FpValue::fraction)
      .def("significand", &FpValue::significand)
      .def("to_double", &FpValue::to_double)
      .def("__eq__", [](const FpValue& a, const FpValue& b) { return a == b; })
      .def("__repr__", [](const FpValue& v) {
        return "FpValue(sign=" + std::to_string(v.sign) + ", exponent=" + std::to_string(v.exponent) +
               ", fraction=" + std::to_string(v.fraction) + ")";
      });

  m.def("decompose", &decompose, py::arg("bits"));
  m.def("compose", &compose, py::arg("value"));
  m.def("from_float", &from_float, py::arg("f"));
  m.def("to_float", &to_float, py::arg("value"));
  m.def("classify", [](std::uint32_t bits) { return std::string(to_string(classify(bits))); }, py::arg("bits"));

  py::class_<ExactScaled>(m, "ExactScaled")
      .def_readonly("value", &ExactScaled::value)
      .def_readonly("scale_bits", &ExactScaled::scale_bits)
      .def("exponent", &ExactScaled::exponent)
      .def("to_double", &ExactScaled::to_double);
  m.def("ref_rsqrt", &ref_rsqrt, py::arg("x"), py::arg("precision_bits") = kDefaultOraclePrecision);

  py::class_<UlpError>(m, "UlpError")
      .def_readonly("ulps", &UlpError::ulps)
      .def("acceptable", &UlpError::acceptable)
      .def("exact", &UlpError::exact);
  m.def("ulp_error", py::overload_cast<const FixedPoint&, const FpValue&>(&ulp_error), py::arg("approx"),
        py::arg("x"));
  m.def("error_exponent", &error_exponent, py::arg("error"));

  py::enum_<TableKind>(m, "TableKind")
      .value("MAIN", TableKind::kMain)
      .value("AUXILIARY", TableKind::kAuxiliary);

  py::class_<TableSpec>(m, "TableSpec")
      .def(py::init<>())
      .def_readwrite("kind", &TableSpec::kind)
      .def_readwrite("addr_bits", &TableSpec::addr_bits)
      .def_readwrite("word_bits", &TableSpec::word_bits)
      .def_readwrite("interp_factor", &TableSpec::interp_factor)
      .def_readwrite("compressed", &TableSpec::compressed)
      .def_static("mlt", &TableSpec::mlt, py::arg("addr_bits"), py::arg("word_bits") = kMltWordBits)
      .def_static("alt", &TableSpec::alt, py::arg("addr_bits"), py::arg("word_bits") = kAltWordBits)
      .def("validate", &TableSpec::validate)
      .def("full_size", &TableSpec::full_size)
      .def("stored_size", &TableSpec::stored_size);

  py::class_<BitThresholds>(m, "BitThresholds")
      .def_readonly("t2", &BitThresholds::t2)
      .def_readonly("t3", &BitThresholds::t3);

  py::class_<LookupTable>(m, "LookupTable")
      .def_readonly("spec", &LookupTable::spec)
      .def_readonly("entries", &LookupTable::entries)
      .def_readonly("thresholds", &LookupTable::thresholds)
      .def("word", &LookupTable::word, py::arg("stored_index"))
      .def("__len__", [](const LookupTable& t) { return t.entries.size(); })
      .def("to_bytes", [](const LookupTable& t) {
        std::ostringstream out;
        write_table(t, out);
        return py::bytes(out.str());
      })
      .def_static("from_bytes", [](const py::bytes& b) {
        std::istringstream in(std::string{b});
        return read_table(in);
      });

  m.def("mlt_entry", &mlt_entry, py::arg("addr_bits"), py::arg("address"), py::arg("word_bits") = kMltWordBits);
  m.def("build_mlt", &build_mlt, py::arg("addr_bits"), py::arg("word_bits") = kMltWordBits);
  m.def("build_alt", py::overload_cast<int, int>(&build_alt), py::arg("addr_bits"),
        py::arg("word_bits") = kAltWordBits);
  m.def("build_table", &build_table, py::arg("spec"));
  m.def("reduce", &reduce, py::arg("table"), py::arg("interp_factor"));
  m.def("compute_thresholds", py::overload_cast<int>(&compute_thresholds), py::arg("addr_bits"));
  m.def("compress_words", &compress_words, py::arg("table"));
  m.def("decompress_word", &decompress_word, py::arg("word20"), py::arg("address"), py::arg("thresholds"));

  py::class_<Seed>(m, "Seed")
      .def_readonly("mantissa_part", &Seed::mantissa_part)
      .def_readonly("result_exponent", &Seed::result_exponent)
      .def("to_double", &Seed::to_double);
  m.def("seed_direct", &seed_direct, py::arg("table"), py::arg("x"));
  m.def("seed_interpolated", &seed_interpolated, py::arg("table"), py::arg("x"));
  m.def("seed_alt", &seed_alt, py::arg("table"), py::arg("x"));
  m.def("make_seed", &make_seed, py::arg("table"), py::arg("x"));

  py::class_<IterateOptions>(m, "IterateOptions")
      .def(py::init<>())
      .def_readwrite("max_iter", &IterateOptions::max_iter)
      .def_readwrite("target_ulps", &IterateOptions::target_ulps)
      .def_readwrite("record_through", &IterateOptions::record_through)
      .def_readwrite("fraction_bits", &IterateOptions::fraction_bits);

  py::class_<IterationTrace>(m, "IterationTrace")
      .def_readonly("error_exponents", &IterationTrace::error_exponents)
      .def_readonly("step_errors", &IterationTrace::step_errors)
      .def_readonly("iterations_to_converge", &IterationTrace::iterations_to_converge)
      .def_readonly("diverged", &IterationTrace::diverged)
      .def_readonly("final_ulp", &IterationTrace::final_ulp)
      .def_readonly("final_value", &IterationTrace::final_value)
      .def_readonly("result_exponent", &IterationTrace::result_exponent);
  m.def("nr_operand", &nr_operand, py::arg("x"), py::arg("fraction_bits") = kDefaultFractionBits);
  m.def("iterate", &iterate, py::arg("a"), py::arg("seed"), py::arg("x"), py::arg("options") = IterateOptions{});
  m.def("evaluate_sample", &evaluate_sample, py::arg("table"), py::arg("x"),
        py::arg("options") = IterateOptions{});

  py::class_<Corpus>(m, "Corpus")
      .def_readonly("prng_seed", &Corpus::prng_seed)
      .def_readonly("count", &Corpus::count)
      .def_readonly("samples", &Corpus::samples);
  m.def("gen_corpus", &gen_corpus, py::arg("prng_seed") = kDefaultPrngSeed,
        py::arg("count") = kDefaultSampleCount);

  py::class_<EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_readwrite("fraction_bits", &EngineConfig::fraction_bits)
      .def_readwrite("max_iter", &EngineConfig::max_iter);

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("spec", &SweepRecord::spec)
      .def_readonly("prng_seed", &SweepRecord::prng_seed)
      .def_readonly("samples", &SweepRecord::samples)
      .def_readonly("fraction_bits", &SweepRecord::fraction_bits)
      .def_readonly("avg_error_exp_iter1", &SweepRecord::avg_error_exp_iter1)
      .def_readonly("avg_error_exp_iter2", &SweepRecord::avg_error_exp_iter2)
      .def_readonly("divergence_pct", &SweepRecord::divergence_pct)
      .def_readonly("avg_iterations", &SweepRecord::avg_iterations)
      .def_readonly("acceptable_after_1", &SweepRecord::acceptable_after_1)
      .def_readonly("acceptable_after_2", &SweepRecord::acceptable_after_2);

  m.def("evaluate_config", py::overload_cast<const TableSpec&, const Corpus&, const EngineConfig&>(&evaluate_config),
        py::arg("spec"), py::arg("corpus"), py::arg("engine") = EngineConfig{});
  m.def("sweep", &sweep, py::arg("kind"), py::arg("addr_bits_list"), py::arg("interp_list"), py::arg("corpus"),
        py::arg("engine") = EngineConfig{}, py::arg("word_bits") = 0);
  m.def("render_csv", &render_csv, py::arg("records"));
  m.def("parse_csv", &records_from_csv, py::arg("text"));
  m.def(
      "render_markdown",
      [](const std::vector<SweepRecord>& records, const std::string& layout) {
        return render_markdown(records, parse_layout(layout));
      },
      py::arg("records"), py::arg("layout") = "table3");
}
