#include <iostream>

#include "spintomo/cli.hpp"

int main(int argc, char** argv) {
  return spintomo::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
