#pragma once

// Identity suite and the empirical estimate of the corona constant as a
// function of the lower bound delta on certified random data.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coronakit/config.hpp"
#include "coronakit/disc_field.hpp"
#include "coronakit/function_core.hpp"

namespace coronakit {

struct IdentityCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<IdentityCheck> checks;
  bool all_passed = false;
};

/// Fixed battery of identities on the configured grids; see the check names
/// in the report for the individual identities.
VerifyReport run_verify(const RunConfig& config);
std::string verify_json(const VerifyReport& report, const RunConfig& config);

/// Random data with sup |f| <= 1 and certified min |f| >= delta. Gaussian
/// coefficients with decay (j+1)^{-2} are normalized to sup 1 and shifted by
/// a constant vector: by -t p(a) for a random interior point a when p already
/// clears delta, otherwise towards a random unit vector. Bisection on the
/// shift keeps the certified lower bound just above delta. Returns false
/// after `max_attempts` rejected draws.
bool random_corona_data(int m, int degree, double delta, const PolarGrid& grid,
                        std::mt19937_64& rng, AnalyticVectorFunction& out, int max_attempts = 20);

struct ExperimentRecord {
  double delta = 0.0;
  int m = 0;
  int n = 0;
  int trial = 0;
  double g_norm = 0.0;
  double bezout_residual = 0.0;
  double dbar_residual = 0.0;
  double wall_ms = 0.0;
  bool empty = false;  // rejection sampling or the solve failed
};

struct EstimateOptions {
  int m = 3;
  std::vector<double> deltas{0.3, 0.5, 0.7};
  std::vector<int> orders{0};
  int trials = 20;
  int data_degree = 4;
  bool timing = false;  // wall_ms stays 0 unless set, keeping output byte-stable
};

/// One record per (delta, n, trial), sorted by delta, then n, then trial.
/// Trial t draws from a generator seeded with seed XOR t, so every delta and
/// order sees the same underlying random draws.
std::vector<ExperimentRecord> estimate_constant(const RunConfig& config, const EstimateOptions& options);

/// CSV with the frozen header delta,m,n,trial,g_norm,bezout_residual,dbar_residual,wall_ms.
std::string records_csv(const std::vector<ExperimentRecord>& records);

struct ConstantSummary {
  double delta = 0.0;
  int n = 0;
  double max_g_norm = 0.0;
  int solved = 0;
};

std::vector<ConstantSummary> summarize(const std::vector<ExperimentRecord>& records);
/// True when, for every n, max ||g|| does not increase with delta.
bool non_increasing_in_delta(const std::vector<ConstantSummary>& summary);

}  // namespace coronakit
