#include <iostream>

#include "grover_lab_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return grover_lab::cli::run(args, std::cout, std::cerr);
}
