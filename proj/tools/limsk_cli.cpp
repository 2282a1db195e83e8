#include <iostream>
#include <string>
#include <vector>

#include "limsk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return limsk::run_command(args, std::cout, std::cerr);
}
