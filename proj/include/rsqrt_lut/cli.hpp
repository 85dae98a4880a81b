#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsqrt_lut::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitUsage = 64;

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsqrt_lut::cli
