#include <iostream>

#include "qsv/cli/commands.hpp"

int main(int argc, char** argv) {
  return qsv::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
