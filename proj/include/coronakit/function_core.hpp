#pragma once

// Truncated Taylor and boundary-sample representations of l^2-valued
// analytic functions on the unit disc, the operator D = -i d/dtheta and the
// norms of the smooth algebras d^{-n}H^infty and D^{-n}L^infty.

#include <complex>
#include <span>
#include <vector>

namespace coronakit {

using cplx = std::complex<double>;

/// Vector of m truncated Taylor series sharing the degree N.
class AnalyticVectorFunction {
 public:
  /// `coeffs[k][j]` is the coefficient of z^j in component k. All components
  /// must have the same length; shorter ones are rejected, not padded.
  explicit AnalyticVectorFunction(std::vector<std::vector<cplx>> coeffs);

  static AnalyticVectorFunction scalar(std::vector<cplx> coeffs);
  static AnalyticVectorFunction constant(std::span<const cplx> values);
  static AnalyticVectorFunction zero(int components, int degree);

  int components() const noexcept { return m_; }
  int degree() const noexcept { return degree_; }

  std::span<const cplx> component(int k) const;
  cplx coeff(int k, int j) const;
  std::vector<std::vector<cplx>> coefficients() const;

  /// Components k and powers j above the degree read as zero.
  cplx coeff_or_zero(int k, int j) const noexcept;

 private:
  int m_ = 0;
  int degree_ = 0;
  std::vector<cplx> data_;  // component-major, m * (degree+1)
};

/// Uniform samples at the G-th roots of unity, component-major.
class BoundaryVectorFunction {
 public:
  BoundaryVectorFunction(int components, int samples, std::vector<cplx> values);

  int components() const noexcept { return m_; }
  int samples() const noexcept { return g_; }

  std::span<const cplx> component(int k) const;
  cplx at(int k, int q) const { return data_[static_cast<size_t>(k) * g_ + q]; }
  double pointwise_norm(int q) const;
  const std::vector<cplx>& raw() const noexcept { return data_; }

 private:
  int m_ = 0;
  int g_ = 0;
  std::vector<cplx> data_;
};

/// Fourier modes k = -G/2 .. G/2-1 of each component.
struct FourierCoefficients {
  int samples = 0;
  std::vector<std::vector<cplx>> modes;  // modes[k][index], index = mode + G/2

  cplx at(int component, int mode) const;
  int lowest() const noexcept { return -samples / 2; }
  int highest() const noexcept { return samples / 2 - 1; }
};

struct NormReport {
  std::vector<double> per_derivative_sup;  // ||f^(j)||_inf, j = 0..n
  double weighted_sum = 0.0;               // sum_j ||f^(j)||_inf / j!
  double dl_norm = 0.0;                    // |f^(0)|_{l2} + ||D^n f||_inf
};

bool is_power_of_two(int value) noexcept;

// Series arithmetic -------------------------------------------------------

std::vector<cplx> evaluate(const AnalyticVectorFunction& f, cplx z);
/// Horner evaluation without the |z| <= 1 check (extension collars).
std::vector<cplx> evaluate_polynomial(const AnalyticVectorFunction& f, cplx z);

AnalyticVectorFunction derivative(const AnalyticVectorFunction& f, int k);
AnalyticVectorFunction apply_D(const AnalyticVectorFunction& f);
AnalyticVectorFunction radial_dilate(const AnalyticVectorFunction& f, double r);
AnalyticVectorFunction truncate(const AnalyticVectorFunction& f, int degree);
AnalyticVectorFunction add(const AnalyticVectorFunction& a, const AnalyticVectorFunction& b);
AnalyticVectorFunction subtract(const AnalyticVectorFunction& a,
                                const AnalyticVectorFunction& b);
AnalyticVectorFunction scale(const AnalyticVectorFunction& f, cplx c);
/// Multiply by z.
AnalyticVectorFunction shift_up(const AnalyticVectorFunction& f);

/// Truncated Cauchy product of scalar `a` with every component of `f`.
AnalyticVectorFunction multiply(const AnalyticVectorFunction& a,
                                const AnalyticVectorFunction& f, int out_degree);
/// sum_k g_k f_k, truncated at `out_degree`.
AnalyticVectorFunction dot(const AnalyticVectorFunction& g,
                           const AnalyticVectorFunction& f, int out_degree);
/// f o phi for scalar phi mapping the disc into itself.
AnalyticVectorFunction compose(const AnalyticVectorFunction& f,
                               const AnalyticVectorFunction& phi, int out_degree);

// Boundary machinery --------------------------------------------------------

BoundaryVectorFunction boundary_trace(const AnalyticVectorFunction& f, int samples);
FourierCoefficients fourier_coefficients(const BoundaryVectorFunction& b);
BoundaryVectorFunction from_fourier(const FourierCoefficients& modes);
/// Nonnegative modes 0..degree as a Taylor series.
AnalyticVectorFunction analytic_part(const FourierCoefficients& modes, int degree);
/// Energy of the negative modes divided by the total energy (0 for zero input).
double negative_mode_fraction(const FourierCoefficients& modes);
double negative_mode_energy(const FourierCoefficients& modes);

BoundaryVectorFunction apply_D(const BoundaryVectorFunction& b);
BoundaryVectorFunction apply_D_power(const BoundaryVectorFunction& b, int n);

double sup_norm(const BoundaryVectorFunction& b);
/// Grid maximum plus pi * ||Db||_grid / G; an upper bound for band-limited data.
double sup_norm_certified(const BoundaryVectorFunction& b);

NormReport norm_dnHinf(const AnalyticVectorFunction& f, int n, int samples);
double norm_DnLinf(const AnalyticVectorFunction& f, int n, int samples);
double norm_DnLinf(const BoundaryVectorFunction& b, int n);

/// Constant c with ||f||_inf <= c ||Df||_inf + |f^(0)| on the circle.
inline constexpr double kMeanValueConstant = 1.5707963267948966;  // pi / 2

}  // namespace coronakit
