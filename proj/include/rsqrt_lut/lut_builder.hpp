#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rsqrt_lut {

enum class TableKind : std::uint8_t { kMain = 0, kAuxiliary = 1 };

const char* to_string(TableKind kind);
TableKind parse_table_kind(const std::string& text);

inline constexpr int kMltWordBits = 23;
inline constexpr int kAltWordBits = 25;
inline constexpr int kCompressedWordBits = 20;
inline constexpr int kMaxInterpFactor = 64;

struct TableSpec {
  TableKind kind = TableKind::kMain;
  int addr_bits = 11;
  int word_bits = kMltWordBits;
  int interp_factor = 1;
  bool compressed = false;

  static TableSpec mlt(int addr_bits, int word_bits = kMltWordBits);
  static TableSpec alt(int addr_bits, int word_bits = kAltWordBits);

  /// Throws ConfigError on any violated constraint.
  void validate() const;

  std::size_t full_size() const { return std::size_t{1} << addr_bits; }
  /// Knots plus the trailing guard entry when interpolating.
  std::size_t stored_size() const;
  int stored_word_bits() const { return compressed ? kCompressedWordBits : word_bits; }

  friend bool operator==(const TableSpec&, const TableSpec&) = default;
};

/// Addresses below t2 have the 2^-2 bit set; addresses below t3 have the 2^-3 bit set,
/// and from t3 on the 2^-3 bit is the complement of the 2^-2 bit.
struct BitThresholds {
  std::uint32_t t2 = 0;
  std::uint32_t t3 = 0;

  friend bool operator==(const BitThresholds&, const BitThresholds&) = default;
};

struct LookupTable {
  TableSpec spec;
  std::vector<std::uint32_t> entries;
  std::optional<BitThresholds> thresholds;  // present iff spec.compressed

  /// Full-width word at a knot position; compressed words are reconstructed.
  std::uint32_t word(std::size_t stored_index) const;

  friend bool operator==(const LookupTable&, const LookupTable&) = default;
};

// --- main tables -----------------------------------------------------------

/// Top `word_bits` fraction bits of 1/sqrt(1 + (address + 0.5) / 2^addr_bits).
/// Valid for address up to and including 2^addr_bits (the guard position).
std::uint32_t mlt_entry(int addr_bits, std::uint64_t address, int word_bits = kMltWordBits);

LookupTable build_mlt(int addr_bits, int word_bits = kMltWordBits);

// --- auxiliary tables ------------------------------------------------------

/// Per-segment result of the coefficient fit.
struct AltSegmentFit {
  std::uint32_t coefficient = 0;  // c * 2^word_bits
  double residual = 0.0;          // max |c*M(x) / rsqrt(x) - 1| over the grid, after quantization
  std::uint32_t worst_offset = 0;  // low-bit offset (units of 2^-23) where the residual is attained
};

/// Fits c such that c * M(x) tracks 1/sqrt(x) over [1 + i/2^k, 1 + (i+1)/2^k), where M(x)
/// is the mantissa with its low (23 - k) bits complemented. Minimax on relative error over
/// a grid holding every representable point, or 1024 evenly spaced points with both ends.
AltSegmentFit fit_alt_segment(int addr_bits, std::uint64_t segment, int word_bits = kAltWordBits);

LookupTable build_alt(int addr_bits, int word_bits = kAltWordBits);
/// Same table, plus the per-segment fits the coefficients came from.
LookupTable build_alt(int addr_bits, int word_bits, std::vector<AltSegmentFit>* fits);

/// Builds the full (F = 1) table a spec describes, then reduces / compresses it.
LookupTable build_table(const TableSpec& spec);

// --- size reduction --------------------------------------------------------

/// Keeps every F-th entry and appends the generator's value at virtual address 2^k.
LookupTable reduce(const LookupTable& table, int interp_factor);

BitThresholds compute_thresholds(const LookupTable& full_mlt);
BitThresholds compute_thresholds(int addr_bits);

/// Drops the three leading bits of every 23-bit MLT word.
LookupTable compress_words(const LookupTable& table);

std::uint32_t decompress_word(std::uint32_t word20, std::uint32_t address,
                              const BitThresholds& thresholds);

// --- serialization ---------------------------------------------------------

void write_table(const LookupTable& table, std::ostream& out);
LookupTable read_table(std::istream& in);
void write_table_file(const LookupTable& table, const std::filesystem::path& path);
LookupTable read_table_file(const std::filesystem::path& path);

/// address,value-hex,value-decimal per line, with a header row.
void write_table_csv(const LookupTable& table, std::ostream& out);

}  // namespace rsqrt_lut
