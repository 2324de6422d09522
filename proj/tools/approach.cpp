#include <iostream>

#include "approach/cli.hpp"

int main(int argc, char** argv) {
  return approach::cli::run_cli(argc, argv, std::cout, std::cerr);
}
