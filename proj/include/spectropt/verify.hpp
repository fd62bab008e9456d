#pragma once

#include <map>
#include <string>
#include <vector>

#include "spectropt/grid.hpp"

namespace spectropt::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::map<std::string, double> numbers;  // raw lhs/rhs/errors per sub-check
  std::string detail;
};

// Runs the property suite on the calibration families. Filters match by
// substring on the check name; empty filter runs everything. oracle_bias
// shifts the analytic reference values (negative-control knob; 0 = honest).
std::vector<CheckResult> run_suite(const std::vector<std::string>& filters,
                                   std::uint64_t seed,
                                   double oracle_bias = 0.0);

std::vector<std::string> check_names();

// One JSON verdict document per check.
std::string result_to_json(const CheckResult& r);

}  // namespace spectropt::verify
