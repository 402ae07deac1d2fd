#include <iostream>

#include "wem/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wem::runCli(args, std::cout, std::cerr);
}
