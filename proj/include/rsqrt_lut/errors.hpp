#pragma once

#include <stdexcept>
#include <string>

namespace rsqrt_lut {

enum class FloatClass { kZero, kSubnormal, kNegative, kInfinity, kNaN, kPositiveNormal };

const char* to_string(FloatClass c);

// Input outside the positive-normal single-precision domain.
class DomainError : public std::domain_error {
 public:
  DomainError(FloatClass seen, const std::string& what)
      : std::domain_error(what), seen_(seen) {}
  FloatClass seen() const { return seen_; }

 private:
  FloatClass seen_;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed or truncated table / CSV input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A generated table violates the bit-pattern structure the word trimming relies on.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration (table spec, engine options, empty inputs).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rsqrt_lut
