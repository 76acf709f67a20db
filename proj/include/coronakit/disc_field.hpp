#pragma once

// Polar quadrature on the unit disc, the discrete d-bar operator, the solid
// Cauchy transform and the Green / Littlewood-Paley identities.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "coronakit/function_core.hpp"

namespace coronakit {

/// Tensor grid: Gauss-Legendre in s = sqrt(r) on (0,1) and Q uniform angles.
/// The s-substitution grades the radial nodes toward the origin, which keeps
/// the log(1/|z|) weight integrable to near machine precision.
class PolarGrid {
 public:
  PolarGrid(int radial, int angular);

  int radial() const noexcept { return R_; }
  int angular() const noexcept { return Q_; }
  int nodes() const noexcept { return R_ * Q_; }
  int index(int i, int q) const noexcept { return i * Q_ + q; }

  double radius(int i) const { return radii_[static_cast<size_t>(i)]; }
  double angle(int q) const;
  cplx point(int i, int q) const;
  cplx point(int node) const { return point(node / Q_, node % Q_); }
  /// Quadrature weight of node (i, q): includes r dr and 2 pi / Q.
  double area_weight(int i) const { return area_weights_[static_cast<size_t>(i)]; }

  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::vector<double>& sqrt_radii() const noexcept { return s_nodes_; }
  const std::vector<double>& sqrt_weights() const noexcept { return s_weights_; }

  /// Radius of the largest disc containing no node, over the closed unit disc
  /// sampled at the nodes, the origin and the Q boundary points.
  double covering_radius() const;

 private:
  int R_;
  int Q_;
  std::vector<double> s_nodes_;
  std::vector<double> s_weights_;
  std::vector<double> radii_;
  std::vector<double> area_weights_;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

GridPtr make_grid(int radial, int angular);

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

enum class FieldKind { Scalar, Vector, Matrix };

struct FieldShape {
  FieldKind kind = FieldKind::Scalar;
  int rows = 1;
  int cols = 1;

  int components() const noexcept { return rows * cols; }
  static FieldShape scalar() { return {FieldKind::Scalar, 1, 1}; }
  static FieldShape vector(int m) { return {FieldKind::Vector, 1, m}; }
  static FieldShape matrix(int m) { return {FieldKind::Matrix, m, m}; }
  bool operator==(const FieldShape&) const = default;
};

/// Samples of a scalar, row-vector or square-matrix valued function on a
/// PolarGrid. Storage is component-major so each entry is a scalar field.
class DiscField {
 public:
  DiscField(GridPtr grid, FieldShape shape);
  DiscField(GridPtr grid, FieldShape shape, std::vector<cplx> values);

  static DiscField sample(GridPtr grid, FieldShape shape,
                          const std::function<std::vector<cplx>(cplx)>& fn);
  static DiscField sample_scalar(GridPtr grid, const std::function<cplx(cplx)>& fn);

  const PolarGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const FieldShape& shape() const noexcept { return shape_; }
  /// Matrix norms are Hilbert-Schmidt (Frobenius) when set.
  bool hilbert_schmidt() const noexcept { return shape_.kind == FieldKind::Matrix; }

  std::span<const cplx> component(int c) const;
  std::span<cplx> component(int c);
  cplx at(int c, int node) const {
    return values_[static_cast<size_t>(c) * grid_->nodes() + node];
  }
  cplx& at(int c, int node) { return values_[static_cast<size_t>(c) * grid_->nodes() + node]; }
  /// Entry (row, col) of a matrix field.
  cplx entry(int row, int col, int node) const { return at(row * shape_.cols + col, node); }

  /// Pointwise l^2 / Hilbert-Schmidt norm.
  double pointwise_norm(int node) const;
  double sup_norm() const;
  const std::vector<cplx>& raw() const noexcept { return values_; }

 private:
  GridPtr grid_;
  FieldShape shape_;
  std::vector<cplx> values_;
};

DiscField linear_combination(cplx a, const DiscField& x, cplx b, const DiscField& y);
/// Largest pointwise norm of x - y, optionally skipping the outermost rings.
double max_difference(const DiscField& x, const DiscField& y, int skip_outer_rings = 0);

/// Area integral of one component.
cplx integrate(const DiscField& u, int component = 0);
cplx integrate(const PolarGrid& grid, const std::function<cplx(cplx)>& fn);

/// d-bar = (e^{i theta}/2)(d_r + (i/r) d_theta): spectral in angle, five-point
/// finite differences in r (centred inside, one-sided on the outer rings).
DiscField dbar(const DiscField& u);

/// Solid Cauchy transform u(zeta) = (1/pi) iint psi(z) / (zeta - z) dA(z),
/// which satisfies d-bar u = psi. Evaluated by angular mode decomposition:
/// mode m of u at radius rho couples only to mode m+1 of psi through a radial
/// integral over [0, rho] (m < 0) or [rho, 1] (m >= 0).
class CauchySolver {
 public:
  explicit CauchySolver(GridPtr grid);

  /// Values on every grid node.
  DiscField apply(const DiscField& psi) const;
  /// Values at `samples` equispaced angles on the circle |zeta| = radius.
  std::vector<std::vector<cplx>> apply_ring(const DiscField& psi, double radius,
                                            int samples) const;

  const PolarGrid& grid() const noexcept { return *grid_; }

 private:
  struct RadialOperator {
    // rows[m + Q/2] maps psi_{m+1}(r_i) to u_m(rho).
    std::vector<double> rows;
  };
  RadialOperator build(double rho) const;
  std::vector<std::vector<cplx>> angular_modes(std::span<const cplx> values) const;
  std::vector<cplx> ring_modes(const std::vector<std::vector<cplx>>& psi_modes,
                               const RadialOperator& op) const;

  GridPtr grid_;
  std::vector<double> bary_;  // barycentric weights of the s-nodes
  std::vector<RadialOperator> node_ops_;
};

DiscField cauchy_transform(const DiscField& psi);
/// Direct O((RQ)^2) quadrature with additive desingularization against the
/// constant-density transform (1/pi) iint dA/(zeta - z) = conj(zeta).
std::vector<std::vector<cplx>> cauchy_transform_direct(const DiscField& psi,
                                                       std::span<const int> target_nodes);

/// Right-hand side of Green's formula, (2/pi) iint lap(z) log(1/|z|) dA, where
/// `lap` holds samples of d dbar u.
cplx green_integral(const DiscField& u, const DiscField& lap);
cplx green_integral(const DiscField& lap);

/// (2/pi) iint |f'|^2 log(1/|z|) dA + |f(0)|^2.
double littlewood_paley_norm(const AnalyticVectorFunction& f, const PolarGrid& grid);
/// Coefficient l^2 norm over all components and powers.
double h2_norm(const AnalyticVectorFunction& f);

}  // namespace coronakit
