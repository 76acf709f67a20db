#pragma once

// Command-line front end: solve, verify, estimate-constant, extend, carleson.

#include <ostream>
#include <string>
#include <vector>

namespace coronakit {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitCertification = 1,
  kExitLowConfidence = 2,
  kExitBudget = 3,
  kExitUsage = 64,
};

/// Runs one command; args excludes the program name. Reports go to the --out
/// file when given and to `out` otherwise; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coronakit
