#include <iostream>
#include <string>
#include <vector>

#include "blochjac/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return blochjac::cli::run(args, std::cin, std::cout, std::cerr);
}
