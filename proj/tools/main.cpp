#include <iostream>

#include "fishcoh/cli.hpp"

int main(int argc, char** argv) {
  return fishcoh::run_cli(argc, argv, std::cout, std::cerr);
}
