#pragma once

// Carleson measures on the disc: weighted area measures sampled on a polar
// grid, the box (cap) characterization, embedding constants over a finite
// test family, and the log-weight bounds for bounded analytic F.

#include <vector>

#include "coronakit/disc_field.hpp"
#include "coronakit/function_core.hpp"

namespace coronakit {

/// dmu = density dA, one nonnegative density value per grid node.
struct MeasureSamples {
  GridPtr grid;
  std::vector<double> density;
  double total_mass = 0.0;
};

MeasureSamples make_measure(GridPtr grid, std::vector<double> density);
/// Plain area measure dA.
MeasureSamples area_measure(GridPtr grid);
/// scale * |F'(z)|^2 log(1/|z|) dA. The default scale 1 is the measure of the
/// proposition; scale 2/pi gives the Littlewood-Paley normalization.
MeasureSamples log_weight_measure(const AnalyticVectorFunction& F, GridPtr grid, double scale = 1.0);

/// mu of the cap {|z - xi| < r}; each node carries its polar cell and the
/// covered fraction of the cell is estimated on a supersample x supersample
/// sub-grid.
double cap_mass(const MeasureSamples& mu, cplx xi, double r, int supersample = 8);

/// max over xi = e^{2 pi i k / xi_count} and r = 2^{-j}, j = 0..r_levels, of
/// cap mass / r.
double box_norm(const MeasureSamples& mu, int xi_count, int r_levels, int supersample = 8);

/// int |f|^2 dmu by the grid quadrature.
double measure_integral(const MeasureSamples& mu, const AnalyticVectorFunction& f);

/// Truncated reproducing kernels sum_{j<=degree} (conj(a) z)^j for |a| in
/// `moduli` at `angles` equispaced arguments, plus monomials z^k, k <= max_power.
std::vector<AnalyticVectorFunction> standard_test_family(int angles = 16, int degree = 64,
                                                         int max_power = 16);

/// max over the family of int |f|^2 dmu / ||f||_{H^2}^2; rejects zero functions.
double embedding_const(const MeasureSamples& mu, const std::vector<AnalyticVectorFunction>& family);

/// Two-sided equivalence constants between the box norm and the embedding
/// constant, fixed once by a calibration run over the documented measures.
inline constexpr double kBoxToEmbedding = 4.0;   // embedding <= K0 * box
inline constexpr double kEmbeddingToBox = 1.0;   // box <= K1 * embedding

struct UchiyamaReport {
  double box_norm = 0.0;
  double bound = 0.0;  // 2 pi e ||u||_inf^2
};

/// Box norm of lap(z) log(1/|z|) dA together with the bound 2 pi e ||u||^2.
/// ||u|| is the node maximum unless a positive `u_sup` (for example the known
/// boundary supremum) is supplied. Throws Subharmonic when lap has samples
/// below -1e-10.
UchiyamaReport uchiyama_bound(const DiscField& u, const DiscField& lap, int xi_count = 64,
                              int r_levels = 6, double u_sup = 0.0);

/// pi e / 2 * ||F||^4: the subharmonic bound specialised to u = |F|^2, for
/// the scale-1 log-weight measure.
double uchiyama_specialization(double F_sup);

struct CarlesonOptions {
  int xi_count = 64;
  int r_levels = 6;
  int supersample = 8;
  int boundary_samples = 4096;
  double tolerance = 1e-3;
};

struct CarlesonReport {
  double F_sup = 0.0;                // ||F||_inf on the boundary grid
  double total_mass = 0.0;
  double box_norm = 0.0;
  double embedding_const = 0.0;      // scale-1 measure
  double normalized_embedding = 0.0; // measure scaled by 2/pi
  double embedding_bound = 0.0;         // 4 ||F||^2
  double uchiyama_bound = 0.0;       // pi e / 2 ||F||^4
  bool within_bound = false;         // both embedding constants <= bound + tolerance
};

CarlesonReport carleson_report(const AnalyticVectorFunction& F, GridPtr grid,
                               const CarlesonOptions& options);

}  // namespace coronakit
