#include <iostream>
#include <string>
#include <vector>

#include "qsu2/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return qsu2::run_cli(args, std::cout, std::cerr);
}
