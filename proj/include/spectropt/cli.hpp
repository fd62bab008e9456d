#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spectropt::cli {

// Exit codes, frozen for CI use.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::vector<std::string> filters;
};

int cmd_torsion(const Options& opt);
int cmd_eigs(const Options& opt);
int cmd_gamma(const Options& opt);
int cmd_optimize(const Options& opt);
int cmd_verify(const Options& opt);
int cmd_sweep(const Options& opt);

// Full argv entry point (argv[0] skipped by the caller).
int run_cli(const std::vector<std::string>& args);

}  // namespace spectropt::cli
