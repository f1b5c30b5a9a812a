#include <iostream>
#include <string>
#include <vector>

#include "gfflab/cli.hpp"

int main(int argc, char** argv) {
  return gfflab::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
