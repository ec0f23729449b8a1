#include <iostream>

#include "smalm/cli.hpp"

int main(int argc, char** argv) {
  return smalm::cli::run(argc, argv, std::cout, std::cerr);
}
