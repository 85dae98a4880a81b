#include "rsqrt_lut/lut_builder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rsqrt_lut/errors.hpp"
#include "rsqrt_lut/fp_core.hpp"

namespace rsqrt_lut {

namespace {

constexpr char kMagic[4] = {'R', 'S', 'Q', 'T'};
constexpr std::uint8_t kFormatVersion = 1;
constexpr int kAltMaxGridPoints = 1024;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

std::uint32_t bit(std::uint32_t word, int pos) { return (word >> pos) & 1u; }

}  // namespace

const char* to_string(TableKind kind) {
  return kind == TableKind::kMain ? "mlt" : "alt";
}

TableKind parse_table_kind(const std::string& text) {
  if (text == "mlt" || text == "MLT") return TableKind::kMain;
  if (text == "alt" || text == "ALT") return TableKind::kAuxiliary;
  throw ConfigError("unknown table kind '" + text + "' (expected mlt or alt)");
}

TableSpec TableSpec::mlt(int addr_bits, int word_bits) {
  return {TableKind::kMain, addr_bits, word_bits, 1, false};
}

TableSpec TableSpec::alt(int addr_bits, int word_bits) {
  return {TableKind::kAuxiliary, addr_bits, word_bits, 1, false};
}

void TableSpec::validate() const {
  const bool main = kind == TableKind::kMain;
  const int min_addr = main ? 4 : 6;
  if (addr_bits < min_addr || addr_bits > 16) {
    throw ConfigError("addr_bits " + std::to_string(addr_bits) + " outside [" +
                      std::to_string(min_addr) + ", 16] for " + to_string(kind));
  }
  if (main && (word_bits < 4 || word_bits > kMltWordBits)) {
    throw ConfigError("MLT word_bits must lie in [4, 23]");
  }
  if (!main && (word_bits < 8 || word_bits > kAltWordBits)) {
    throw ConfigError("ALT word_bits must lie in [8, 25]");
  }
  if (!is_power_of_two(interp_factor) || interp_factor > kMaxInterpFactor) {
    throw ConfigError("interpolation factor must be a power of two in [1, 64]");
  }
  if (static_cast<std::size_t>(interp_factor) > full_size()) {
    throw ConfigError("interpolation factor does not divide 2^addr_bits");
  }
  if (compressed && (!main || word_bits != kMltWordBits || interp_factor != 1)) {
    throw ConfigError("word compression applies only to full 23-bit MLTs (interpolation factor 1)");
  }
}

std::size_t TableSpec::stored_size() const {
  return full_size() / interp_factor + (interp_factor > 1 ? 1 : 0);
}

std::uint32_t LookupTable::word(std::size_t stored_index) const {
  const std::uint32_t raw = entries.at(stored_index);
  if (!spec.compressed) return raw;
  return decompress_word(raw, static_cast<std::uint32_t>(stored_index), *thresholds);
}

// --- main tables -----------------------------------------------------------

std::uint32_t mlt_entry(int addr_bits, std::uint64_t address, int word_bits) {
  // Midpoint v = 1 + (2*address + 1) / 2^(k+1); at the guard address v = 2 + 2^-(k+1).
  const std::uint64_t num = 2 * address + 1;
  const int frac_shift = kMantissaBits - (addr_bits + 1);
  FpValue v;
  if (address < (std::uint64_t{1} << addr_bits)) {
    v = {0, 0, static_cast<std::uint32_t>(num << frac_shift)};
  } else {
    // v / 2 = 1 + (num - 2^(k+1)) / 2^(k+2)
    const std::uint64_t rest = num - (std::uint64_t{1} << (addr_bits + 1));
    v = {0, 1, static_cast<std::uint32_t>(rest << (frac_shift - 1))};
  }
  const ExactScaled r = ref_rsqrt(v);
  return static_cast<std::uint32_t>(r.value >> (r.scale_bits - word_bits));
}

LookupTable build_mlt(int addr_bits, int word_bits) {
  LookupTable t{TableSpec::mlt(addr_bits, word_bits), {}, std::nullopt};
  t.spec.validate();
  t.entries.resize(t.spec.full_size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    t.entries[i] = mlt_entry(addr_bits, i, word_bits);
  }
  return t;
}

// --- auxiliary tables ------------------------------------------------------

AltSegmentFit fit_alt_segment(int addr_bits, std::uint64_t segment, int word_bits) {
  const std::uint32_t points = 1u << (kMantissaBits - addr_bits);
  const int grid = static_cast<int>(std::min<std::uint32_t>(points, kAltMaxGridPoints));
  const double base = 1.0 + std::ldexp(static_cast<double>(segment), -addr_bits);
  const double ulp = std::ldexp(1.0, -kMantissaBits);

  auto offset_at = [&](int j) -> std::uint32_t {
    if (static_cast<std::uint32_t>(grid) == points) return static_cast<std::uint32_t>(j);
    return static_cast<std::uint32_t>(std::llround(static_cast<double>(j) * (points - 1) / (grid - 1)));
  };
  auto operand = [&](std::uint32_t off) { return base + off * ulp; };
  auto modified = [&](std::uint32_t off) { return base + (points - 1 - off) * ulp; };

  double rho_min = INFINITY;
  double rho_max = 0.0;
  for (int j = 0; j < grid; ++j) {
    const std::uint32_t off = offset_at(j);
    const double rho = (1.0 / std::sqrt(operand(off))) / modified(off);
    rho_min = std::min(rho_min, rho);
    rho_max = std::max(rho_max, rho);
  }
  // Equal-ripple point of max |c / rho - 1|.
  const double c = 2.0 * rho_min * rho_max / (rho_min + rho_max);
  const double limit = std::ldexp(1.0, word_bits) - 1.0;
  const double q = std::min(std::round(std::ldexp(c, word_bits)), limit);

  AltSegmentFit fit;
  fit.coefficient = static_cast<std::uint32_t>(q);
  const double cq = std::ldexp(q, -word_bits);
  for (int j = 0; j < grid; ++j) {
    const std::uint32_t off = offset_at(j);
    const double err = std::abs(cq * modified(off) * std::sqrt(operand(off)) - 1.0);
    if (err > fit.residual) {
      fit.residual = err;
      fit.worst_offset = off;
    }
  }
  return fit;
}

LookupTable build_alt(int addr_bits, int word_bits) {
  return build_alt(addr_bits, word_bits, nullptr);
}

LookupTable build_alt(int addr_bits, int word_bits, std::vector<AltSegmentFit>* fits) {
  LookupTable t{TableSpec::alt(addr_bits, word_bits), {}, std::nullopt};
  t.spec.validate();
  t.entries.resize(t.spec.full_size());
  if (fits) fits->resize(t.entries.size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const AltSegmentFit fit = fit_alt_segment(addr_bits, i, word_bits);
    t.entries[i] = fit.coefficient;
    if (fits) (*fits)[i] = fit;
  }
  return t;
}

LookupTable build_table(const TableSpec& spec) {
  spec.validate();
  LookupTable t = spec.kind == TableKind::kMain ? build_mlt(spec.addr_bits, spec.word_bits)
                                                : build_alt(spec.addr_bits, spec.word_bits);
  if (spec.interp_factor > 1) t = reduce(t, spec.interp_factor);
  if (spec.compressed) t = compress_words(t);
  return t;
}

// --- size reduction --------------------------------------------------------

LookupTable reduce(const LookupTable& table, int interp_factor) {
  if (table.spec.interp_factor != 1 || table.spec.compressed) {
    throw ConfigError("reduce expects a full, uncompressed table");
  }
  TableSpec spec = table.spec;
  spec.interp_factor = interp_factor;
  spec.validate();
  if (interp_factor == 1) return table;

  LookupTable out{spec, {}, std::nullopt};
  out.entries.reserve(spec.stored_size());
  for (std::size_t a = 0; a < table.entries.size(); a += interp_factor) {
    out.entries.push_back(table.entries[a]);
  }
  const std::uint64_t guard = spec.full_size();
  out.entries.push_back(spec.kind == TableKind::kMain
                            ? mlt_entry(spec.addr_bits, guard, spec.word_bits)
                            : fit_alt_segment(spec.addr_bits, guard, spec.word_bits).coefficient);
  return out;
}

BitThresholds compute_thresholds(const LookupTable& full_mlt) {
  const TableSpec& s = full_mlt.spec;
  if (s.kind != TableKind::kMain || s.word_bits != kMltWordBits || s.interp_factor != 1 ||
      s.compressed) {
    throw ConfigError("thresholds are defined on full, uncompressed 23-bit MLTs");
  }
  constexpr int kB1 = kMltWordBits - 1;
  constexpr int kB2 = kMltWordBits - 2;
  constexpr int kB3 = kMltWordBits - 3;
  const auto& e = full_mlt.entries;
  const std::size_t n = e.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (!bit(e[i], kB1)) {
      throw StructuralError("leading bit clear at address " + std::to_string(i));
    }
  }
  std::size_t t2 = 0;
  while (t2 < n && bit(e[t2], kB2)) ++t2;
  for (std::size_t i = t2; i < n; ++i) {
    if (bit(e[i], kB2)) {
      throw StructuralError("second bit set at address " + std::to_string(i) +
                            " after the prefix ended at " + std::to_string(t2));
    }
  }
  std::size_t t3 = 0;
  while (t3 < n && bit(e[t3], kB3)) ++t3;
  for (std::size_t i = t3; i < n; ++i) {
    if (bit(e[i], kB3) == bit(e[i], kB2)) {
      throw StructuralError("third bit is not the complement of the second at address " +
                            std::to_string(i));
    }
  }
  return {static_cast<std::uint32_t>(t2), static_cast<std::uint32_t>(t3)};
}

BitThresholds compute_thresholds(int addr_bits) { return compute_thresholds(build_mlt(addr_bits)); }

LookupTable compress_words(const LookupTable& table) {
  TableSpec spec = table.spec;
  spec.compressed = true;
  spec.validate();
  if (table.spec.compressed) throw ConfigError("table is already compressed");

  LookupTable out{spec, table.entries, compute_thresholds(table)};
  constexpr std::uint32_t kLowMask = (1u << kCompressedWordBits) - 1;
  for (auto& w : out.entries) w &= kLowMask;
  return out;
}

std::uint32_t decompress_word(std::uint32_t word20, std::uint32_t address,
                              const BitThresholds& thresholds) {
  const std::uint32_t b2 = address < thresholds.t2 ? 1u : 0u;
  const std::uint32_t b3 = address < thresholds.t3 ? 1u : (b2 ^ 1u);
  const std::uint32_t prefix = (1u << 2) | (b2 << 1) | b3;
  return (prefix << kCompressedWordBits) | (word20 & ((1u << kCompressedWordBits) - 1));
}

// --- serialization ---------------------------------------------------------

namespace {

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint64_t get_le(std::istream& in, int bytes, const char* what) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw FormatError(std::string("truncated table file while reading ") + what);
    }
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_table(const LookupTable& table, std::ostream& out) {
  const TableSpec& s = table.spec;
  s.validate();
  out.write(kMagic, sizeof kMagic);
  put_le(out, kFormatVersion, 1);
  put_le(out, static_cast<std::uint8_t>(s.kind), 1);
  put_le(out, static_cast<std::uint64_t>(s.addr_bits), 1);
  put_le(out, static_cast<std::uint64_t>(s.word_bits), 1);
  put_le(out, static_cast<std::uint64_t>(std::countr_zero(static_cast<unsigned>(s.interp_factor))), 1);
  put_le(out, s.compressed ? 1 : 0, 1);
  put_le(out, 0, 2);
  if (s.compressed) {
    put_le(out, table.thresholds->t2, 4);
    put_le(out, table.thresholds->t3, 4);
  }
  put_le(out, table.entries.size(), 8);
  for (std::uint32_t e : table.entries) put_le(out, e, 4);
  if (!out) throw FormatError("failed writing table");
}

LookupTable read_table(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic)) throw FormatError("truncated table file while reading magic");
  if (!std::equal(magic, magic + 4, kMagic)) throw FormatError("bad magic: not an RSQT table file");
  const auto version = get_le(in, 1, "version");
  if (version != kFormatVersion) {
    throw FormatError("unsupported table format version " + std::to_string(version));
  }
  const auto kind = get_le(in, 1, "kind");
  if (kind > 1) throw FormatError("unknown table kind byte " + std::to_string(kind));

  LookupTable t;
  t.spec.kind = static_cast<TableKind>(kind);
  t.spec.addr_bits = static_cast<int>(get_le(in, 1, "addr_bits"));
  t.spec.word_bits = static_cast<int>(get_le(in, 1, "word_bits"));
  const auto log_f = get_le(in, 1, "interp_factor");
  if (log_f > 6) throw FormatError("interpolation factor exponent out of range");
  t.spec.interp_factor = 1 << log_f;
  const auto compressed = get_le(in, 1, "compressed flag");
  if (compressed > 1) throw FormatError("compressed flag must be 0 or 1");
  t.spec.compressed = compressed == 1;
  if (get_le(in, 2, "reserved") != 0) throw FormatError("reserved header bytes must be zero");
  try {
    t.spec.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid table header: ") + e.what());
  }
  if (t.spec.compressed) {
    BitThresholds th;
    th.t2 = static_cast<std::uint32_t>(get_le(in, 4, "t2"));
    th.t3 = static_cast<std::uint32_t>(get_le(in, 4, "t3"));
    t.thresholds = th;
  }
  const auto count = get_le(in, 8, "entry count");
  if (count != t.spec.stored_size()) {
    throw FormatError("entry count " + std::to_string(count) + " does not match header (expected " +
                      std::to_string(t.spec.stored_size()) + ")");
  }
  const std::uint64_t limit = std::uint64_t{1} << t.spec.stored_word_bits();
  t.entries.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto v = get_le(in, 4, "entries");
    if (v >= limit) {
      throw FormatError("entry " + std::to_string(i) + " exceeds " +
                        std::to_string(t.spec.stored_word_bits()) + "-bit word width");
    }
    t.entries[i] = static_cast<std::uint32_t>(v);
  }
  return t;
}

void write_table_file(const LookupTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_table(table, out);
}

LookupTable read_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_table(in);
}

void write_table_csv(const LookupTable& table, std::ostream& out) {
  out << "address,value_hex,value_decimal\n";
  const int digits = (table.spec.stored_word_bits() + 3) / 4;
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const std::uint32_t v = table.entries[i];
    std::string hex(digits, '0');
    for (int d = 0; d < digits; ++d) hex[digits - 1 - d] = kHex[(v >> (4 * d)) & 0xFu];
    out << i * table.spec.interp_factor << ",0x" << hex << ',' << v << '\n';
  }
}

}  // namespace rsqrt_lut
