#pragma once

// Constructive d-bar solution of the Bezout equation g.f = 1: the row
// phi = f*/|f|^2, its d-bar derivative, the matrix density Phi, the Cauchy
// transform Psi, the antisymmetric correction g = phi + f^T (Psi^T - Psi),
// analytic projection and Neumann refinement, plus the augmentation device.

#include <utility>
#include <vector>

#include "coronakit/disc_field.hpp"
#include "coronakit/function_core.hpp"

namespace coronakit {

struct CoronaData {
  AnalyticVectorFunction f;
  double delta = 0.0;         // certified lower bound for |f| on the disc
  double measured_min = 0.0;  // grid minimum of |f|
  NormReport norm_cert;
};

/// Grid minimum of |f| over every node including the boundary ring, minus
/// the covering radius times the certified boundary sup of |f'|.
double certify_min_modulus(const AnalyticVectorFunction& f, const PolarGrid& grid);
/// Grid minimum of |f| without the Lipschitz correction.
double grid_min_modulus(const AnalyticVectorFunction& f, const PolarGrid& grid);

/// Certifies the corona condition; throws Certification when the bound is <= 0.
CoronaData certify(const AnalyticVectorFunction& f, const PolarGrid& grid, int order,
                   int boundary_samples);

/// phi = f*/|f|^2 as a row field.
DiscField phi_field(const AnalyticVectorFunction& f, const GridPtr& grid);
/// d-bar phi = (f')*/|f|^2 - ((f')* f) f*/|f|^4, from the closed formula.
DiscField dbar_phi(const AnalyticVectorFunction& f, const GridPtr& grid);
/// Phi_{jk} = phi_j (d-bar phi)_k.
DiscField build_Phi(const AnalyticVectorFunction& f, const GridPtr& grid);
/// Entrywise Cauchy transform of a matrix density.
DiscField solve_psi(const DiscField& Phi, const CauchySolver& solver);
DiscField solve_psi(const DiscField& Phi);

/// Node values of phi + f^T (Psi^T - Psi) with the two algebraic identities.
struct NodeAssembly {
  DiscField g;
  double phi_identity = 0.0;    // max |phi.f - 1|
  double xi_identity = 0.0;     // max |f^T Xi f|, Xi = Psi - Psi^T
  double bezout_identity = 0.0; // max |g.f - 1|
};
NodeAssembly assemble_nodes(const AnalyticVectorFunction& f, const DiscField& phi,
                            const DiscField& Psi);

struct CoronaSolution {
  AnalyticVectorFunction g = AnalyticVectorFunction::zero(1, 0);
  double bezout_residual = 0.0;         // boundary sup of |g.f - 1| after all repairs
  double projected_residual = 0.0;      // same, right after analytic projection
  double antianalytic_residual = 0.0;   // l2 norm of negative modes before projection
  double negative_mode_fraction = 0.0;  // their share of the total energy
  double dbar_residual = 0.0;           // relative d-bar residual of Psi
  double phi_identity = 0.0;
  double xi_identity = 0.0;
  double node_bezout_identity = 0.0;
  bool low_confidence = false;
  NormReport g_norm;
  std::vector<std::pair<double, double>> refinement_log;  // (r, ||alpha||)
};

struct AssembleOptions {
  int boundary_samples = 4096;   // G
  int degree = -1;               // truncation degree of g; -1 selects 2N+16
  int order = 0;                 // n of the reported norm
  double low_confidence_fraction = 0.1;
};

/// Boundary assembly: g on the circle from phi and the unit-ring values of
/// C[Phi], followed by projection to Fourier modes 0..degree.
CoronaSolution assemble_g(const AnalyticVectorFunction& f, const DiscField& Phi,
                          const CauchySolver& solver, const AssembleOptions& options);
/// Same, from Psi sampled at the G-th roots of unity: psi_ring[j*m+i][q] is
/// entry (j, i) at angle 2 pi q / G.
CoronaSolution assemble_g(const AnalyticVectorFunction& f,
                          const std::vector<std::vector<cplx>>& psi_ring,
                          const AssembleOptions& options);

struct RefineOptions {
  int terms = 8;                // K
  int order = 0;                // n of the norm used for ||alpha||
  int boundary_samples = 4096;  // grid for sup norms
  int max_degree = -1;          // cap on product degrees; -1 picks a default
};

/// g' = sum_{k<=K} (-alpha)^k g_raw with alpha = g_raw.f - 1. Refuses when
/// ||alpha|| >= 1. `r` is the dilation at which g_raw was computed and is
/// recorded in the log.
CoronaSolution refine_neumann(const AnalyticVectorFunction& f, const AnalyticVectorFunction& g_raw,
                              double r, const RefineOptions& options);

/// Upper bound ||alpha||^{K+1} / (1 - ||alpha||) on the refined residual.
double neumann_bound(double alpha_norm, int terms);

struct SolveOptions {
  int radial = 64;
  int angular = 128;
  int boundary_samples = 4096;
  int degree = -1;
  int order = 0;
  int terms = 8;
  double dilation = 1.0;  // solve for f(r z), then refine against f
  double low_confidence_fraction = 0.1;
};

/// Full pipeline: certify, phi, Phi, Psi, boundary assembly, projection and
/// Neumann refinement. Throws Certification for data that fail the corona
/// condition.
CoronaSolution solve_corona(const AnalyticVectorFunction& f, const SolveOptions& options);

struct AugmentedData {
  AnalyticVectorFunction f_aug = AnalyticVectorFunction::zero(1, 0);
  double gamma = 0.0;
  double delta_tilde = 0.0;
  double norm_bound = 0.0;  // sqrt(delta^2 + gamma^2) + 1 - delta
};

double augmented_delta(double delta, double gamma);
/// Prepends the constant component gamma.
AugmentedData augment(const AnalyticVectorFunction& f, double delta, double gamma);

}  // namespace coronakit
