#include <iostream>

#include "tanglie/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tanglie::cli::run_command(args, std::cout, std::cerr);
}
