#include <iostream>
#include <string>
#include <vector>

#include "gravtritter/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gravtritter::cli::run(args, std::cout, std::cerr);
}
