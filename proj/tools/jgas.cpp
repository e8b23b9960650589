#include <iostream>
#include <string>
#include <vector>

#include "jgas/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return jgas::cli::run(args, std::cout, std::cerr);
}
