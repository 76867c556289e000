#include <iostream>
#include <string>
#include <vector>

#include "bwt/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return bwt::cli::main_entry(args, std::cout, std::cerr);
}
