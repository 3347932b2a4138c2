#include <iostream>

#include "fracture/cli.hpp"

int main(int argc, char** argv) {
  return fracture::cli::main_entry(argc, argv, std::cout, std::cerr);
}
