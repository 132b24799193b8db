#include <iostream>
#include <string>
#include <vector>

#include "tqs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tqs::run_cli(args, std::cout, std::cerr);
}
