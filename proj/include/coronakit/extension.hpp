#pragma once

// Approximate holomorphic extension across boundary arcs. A radial jet
// extension E is corrected by h = phi E - C[(dbar phi) E] for a smooth cutoff
// phi, and F = E - h + h(r .) is built arc by arc under geometric budgets.

#include <functional>
#include <vector>

#include "coronakit/function_core.hpp"

namespace coronakit {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Polar box {theta in [theta.lo, theta.hi] (mod 2 pi), r in [r.lo, r.hi]}.
struct PolarBox {
  Interval theta;
  Interval r;

  bool contains(cplx z) const;
  /// The representative of `angle` mod 2 pi closest to the box centre.
  double unwrap(double angle) const;
};

/// One closed arc C with its cutoff neighbourhoods U inside W.
struct ArcSpec {
  Interval C;
  PolarBox U;
  PolarBox W;
};

/// The open set S (disjoint open intervals) and the closed arcs to extend across.
struct ArcSet {
  std::vector<Interval> S;
  std::vector<ArcSpec> arcs;
};

/// Default U, W for a closed arc inside the S-interval `host`.
ArcSpec default_arc(const Interval& host, const Interval& C);
/// Checks the strict nesting C in U in W with W over S on the circle. W boxes
/// of different arcs must be angularly disjoint. Throws Invalid.
void validate(const ArcSet& set);

/// Order-n radial jet extension: f inside the closed disc and
/// sum_{j<=n} (rho-1)^j / j! e^{ij theta} f^{(j)}(e^{i theta}) outside.
class JetExtension {
 public:
  JetExtension(const AnalyticVectorFunction& f, int order);
  std::vector<cplx> operator()(cplx z) const;
  /// Writes components() values to out.
  void eval(cplx z, cplx* out) const;
  /// d-bar of the extension; zero inside the closed disc.
  void eval_dbar(cplx z, cplx* out) const;
  int order() const noexcept { return order_; }
  int components() const noexcept { return f_.components(); }

 private:
  AnalyticVectorFunction f_;
  int order_;
  std::vector<AnalyticVectorFunction> derivatives_;
};

/// Jet extension evaluated at collar points; points outside the closed disc
/// must lie in the angular sector of some S interval (Domain error otherwise).
std::vector<std::vector<cplx>> radial_extension(const AnalyticVectorFunction& f, int order,
                                                const ArcSet& set, const std::vector<cplx>& points);

/// Smooth step exp(-1/t)/(exp(-1/t)+exp(-1/(1-t))) and its derivative.
double smooth_step(double t);
double smooth_step_derivative(double t);

/// Tensor-product cutoff equal to 1 on U and vanishing outside W.
class SmoothBump {
 public:
  SmoothBump(const PolarBox& U, const PolarBox& W, double amplitude = 1.0);
  double value(cplx z) const;
  /// dbar = (e^{i theta}/2)(d_r + (i/r) d_theta).
  cplx dbar(cplx z) const;
  const PolarBox& inner() const noexcept { return U_; }
  const PolarBox& outer() const noexcept { return W_; }
  double amplitude() const noexcept { return amplitude_; }

 private:
  double ramp(double x, double out_lo, double in_lo, double in_hi, double out_hi, double* deriv) const;
  PolarBox U_;
  PolarBox W_;
  double amplitude_;
};

struct QuadratureOptions {
  int angles = 96;  // trapezoid directions around the target
  int points = 24;  // Gauss points per ray piece
};

/// h = phi E - C[(dbar phi) E] with C[psi](zeta) = (1/pi) iint psi(z)/(zeta - z) dA.
/// Since phi E has compact support this equals C[phi dbar E], which is the
/// form evaluated: the density vanishes on the disc and wherever E is
/// analytic. The area integral runs in target-centred polar coordinates with
/// every ray split where it crosses the unit circle and the edges of U and W.
class Correction {
 public:
  /// Writes the components of E(z) (or dbar E(z)) to out; only called for z in W.
  using Data = std::function<void(cplx, cplx*)>;
  Correction(SmoothBump bump, Data E, Data dbar_E, int components, QuadratureOptions quad = {});

  std::vector<cplx> h(cplx zeta) const;
  /// h(r z) - h(z).
  std::vector<cplx> dilation_gap(cplx z, double r) const;
  /// E(zeta) - h(zeta).
  std::vector<cplx> remainder(cplx zeta) const;
  const SmoothBump& bump() const noexcept { return bump_; }
  int components() const noexcept { return m_; }

 private:
  // Integral of phi dbar E along zeta + s e, s > 0.
  void ray(cplx zeta, cplx e, cplx* out, std::vector<double>& breaks, std::vector<cplx>& val) const;

  SmoothBump bump_;
  Data E_;
  Data dbar_E_;
  int m_;
  QuadratureOptions quad_;
  std::vector<double> gx_;
  std::vector<double> gw_;
};

/// d-bar of a vector function at zeta estimated from the e^{-it} Fourier
/// coefficient of F(zeta + tau e^{it}) divided by tau.
double contour_dbar(const std::function<std::vector<cplx>(cplx)>& F, cplx zeta, double tau,
                    int points = 16);

struct CorrectionReport {
  double dbar_h_disc = 0.0;   // sup over disc checkpoints of |dbar h|
  double dbar_E_minus_h_U = 0.0;  // sup over U checkpoints of |dbar (E - h)|
  int checkpoints = 0;
};

struct ExtensionOptions {
  int order = 0;                 // n
  int boundary_samples = 128;    // circle samples for the order-n norm of h_r - h
  QuadratureOptions quad;
  int contour_points = 16;
  double contour_radius = 0.02;
  int checks_per_region = 24;
  int max_raises = 6;            // r <- 1 - (1-r)/2 at most this many times per step
  double dbar_tolerance = 1e-2;
  int certificate_refinements = 2;  // finer quadrature passes before a certificate fails
};

/// Checks the two analyticity certificates of h on sample points.
CorrectionReport correction_report(const Correction& c, const ArcSpec& arc,
                                   const ExtensionOptions& options);

/// Polar parameterization 1 + sum kappa_i b_i(theta) of the enlarged domain.
struct ExtendedDomainGrid {
  std::vector<double> theta;
  std::vector<double> rho;
  std::vector<double> max_divided_difference;  // per order 0..N
  std::vector<cplx> collar;                    // collar checkpoints outside the disc
};

struct ExtensionStep {
  int index = 0;
  double r = 0.0;
  double budget = 0.0;
  double eps_S1 = 0.0;
  double dbar_disc = 0.0;
  double dbar_collar = 0.0;
  int attempts = 0;
  bool met = false;
};

struct ExtensionResult {
  AnalyticVectorFunction F_disc = AnalyticVectorFunction::zero(1, 0);  // F restricted to the disc
  std::vector<std::vector<cplx>> collar_values;  // F at domain.collar
  ExtendedDomainGrid domain;
  double eps_S1 = 0.0;                  // order-n norm of F|_D - f
  double eps_S3 = 0.0;                  // | ||F||_{enlarged} - ||f||_D |
  double dbar_residual_disc = 0.0;
  double dbar_residual_collar = 0.0;
  double negative_mode_fraction = 0.0;  // of the disc correction samples
  double f_norm = 0.0;
  double F_norm = 0.0;
  double budget = 0.0;
  bool budget_met = false;
  int failed_step = -1;
  std::vector<ExtensionStep> steps;
};

/// One arc: F = E - h + h(r .). Meets the budget when eps_S1 < budget and
/// both d-bar residuals are below options.dbar_tolerance.
ExtensionResult approximate_extension(const AnalyticVectorFunction& f, const ArcSpec& arc, double r,
                                      double budget, const ExtensionOptions& options);

/// Finite-arc iteration with budgets eps 2^{-k}; a step that misses its
/// budget raises r before the run is declared failed at that step.
ExtensionResult multi_arc_extension(const AnalyticVectorFunction& f, const ArcSet& set, double eps,
                                    double r, const ExtensionOptions& options);

}  // namespace coronakit
