#include <iostream>
#include <string>
#include <vector>

#include "ulam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ulam::cli::run(args, std::cout, std::cerr);
}
