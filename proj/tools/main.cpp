#include <iostream>
#include <string>
#include <vector>

#include "nbgate/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return nbgate::cli::dispatch(args, std::cout, std::cerr);
}
