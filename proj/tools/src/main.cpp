#include <iostream>
#include <string>
#include <vector>

#include "bicons4/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bicons4::cli::run(args, std::cout, std::cerr);
}
