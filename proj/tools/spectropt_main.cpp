#include <string>
#include <vector>

#include "spectropt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spectropt::cli::run_cli(args);
}
