#pragma once

// Run configuration shared by the command-line tools and the experiments.

#include <cstdint>
#include <string>

namespace coronakit {

struct RunConfig {
  int degree = -1;              // N: truncation degree of g; -1 selects 2N_f + 16
  int boundary_samples = 4096;  // G
  int radial = 64;              // R
  int angular = 128;            // Q
  int order = 0;                // n
  double tol_bezout = 1e-4;
  double tol_dbar = 1e-2;
  double tol_norm = 1e-3;
  std::uint64_t seed = 1;
  std::string output_path;
};

/// Checks that G is a power of two with G >= 2(N+1) for both the data degree
/// and the truncation degree of g (automatic when negative). The grid sizes
/// and tolerances must lie in their documented ranges. Throws Invalid.
void validate(const RunConfig& config, int data_degree = 0);

}  // namespace coronakit
