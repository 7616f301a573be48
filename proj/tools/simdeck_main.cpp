#include <iostream>

#include "simdeck/cli.hpp"

int main(int argc, char** argv) {
  return simdeck::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
