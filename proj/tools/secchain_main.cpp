#include <iostream>

#include "secchain/harness.hpp"

int main(int argc, char** argv) {
  return secchain::cli_main(argc, argv, std::cout, std::cerr);
}
