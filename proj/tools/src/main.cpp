#include <iostream>
#include <string>
#include <vector>

#include "dagplan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dagplan::cli::dispatch(args, std::cout, std::cerr);
}
