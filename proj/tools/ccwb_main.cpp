#include <iostream>
#include <string>
#include <vector>

#include "ccwb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ccwb::run_cli(args, std::cout, std::cerr);
}
