#include <iostream>
#include <string>
#include <vector>

#include "hamlb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hamlb::run_cli(args, std::cout, std::cerr);
}
