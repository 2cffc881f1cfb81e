#include <iostream>
#include <string>
#include <vector>

#include "normhol/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return normhol::cli::run(args, std::cout, std::cerr);
}
