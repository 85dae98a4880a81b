#include <iostream>
#include <string>
#include <vector>

#include "rsqrt_lut/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return rsqrt_lut::cli::run(args, std::cout, std::cerr);
}
