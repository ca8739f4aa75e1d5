#include <iostream>

#include "sysmat/cli.hpp"

int main(int argc, char** argv) {
  return sysmat::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
