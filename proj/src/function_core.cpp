#include "coronakit/function_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coronakit/errors.hpp"
#include "detail/fft.hpp"

namespace coronakit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degree: return "degree";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Aliasing: return "aliasing";
    case ErrorKind::Range: return "range";
    case ErrorKind::Stencil: return "stencil";
    case ErrorKind::Certification: return "certification";
    case ErrorKind::Refinement: return "refinement";
    case ErrorKind::Subharmonic: return "subharmonic";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Invalid: return "invalid";
  }
  return "unknown";
}

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::vector<cplx> cauchy_product(std::span<const cplx> a, std::span<const cplx> b,
                                 int out_degree) {
  std::vector<cplx> out(static_cast<size_t>(out_degree) + 1, cplx{});
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  for (int i = 0; i < na && i <= out_degree; ++i) {
    if (a[i] == cplx{}) continue;
    const int jmax = std::min(nb - 1, out_degree - i);
    for (int j = 0; j <= jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

int boundary_grid_for(int degree) {
  int g = 4096;
  while (g < 2 * (degree + 1)) g *= 2;
  return g;
}

}  // namespace

// AnalyticVectorFunction ---------------------------------------------------

AnalyticVectorFunction::AnalyticVectorFunction(std::vector<std::vector<cplx>> coeffs) {
  if (coeffs.empty()) fail(ErrorKind::Shape, "analytic function needs at least one component");
  const size_t len = coeffs.front().size();
  if (len == 0) fail(ErrorKind::Shape, "component without coefficients");
  m_ = static_cast<int>(coeffs.size());
  degree_ = static_cast<int>(len) - 1;
  data_.reserve(coeffs.size() * len);
  for (const auto& c : coeffs) {
    if (c.size() != len) fail(ErrorKind::Shape, "components must share the truncation degree");
    for (cplx a : c) {
      if (!finite(a)) fail(ErrorKind::Invalid, "non-finite Taylor coefficient");
      data_.push_back(a);
    }
  }
}

AnalyticVectorFunction AnalyticVectorFunction::scalar(std::vector<cplx> coeffs) {
  return AnalyticVectorFunction(std::vector<std::vector<cplx>>{std::move(coeffs)});
}

AnalyticVectorFunction AnalyticVectorFunction::constant(std::span<const cplx> values) {
  std::vector<std::vector<cplx>> c;
  for (cplx v : values) c.push_back({v});
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction AnalyticVectorFunction::zero(int components, int degree) {
  if (components < 1 || degree < 0) fail(ErrorKind::Shape, "invalid zero function shape");
  return AnalyticVectorFunction(std::vector<std::vector<cplx>>(
      static_cast<size_t>(components), std::vector<cplx>(static_cast<size_t>(degree) + 1)));
}

std::span<const cplx> AnalyticVectorFunction::component(int k) const {
  if (k < 0 || k >= m_) fail(ErrorKind::Shape, "component index out of range");
  return {data_.data() + static_cast<size_t>(k) * (degree_ + 1),
          static_cast<size_t>(degree_) + 1};
}

cplx AnalyticVectorFunction::coeff(int k, int j) const {
  if (j < 0 || j > degree_) fail(ErrorKind::Degree, "power outside truncation");
  return component(k)[j];
}

cplx AnalyticVectorFunction::coeff_or_zero(int k, int j) const noexcept {
  if (k < 0 || k >= m_ || j < 0 || j > degree_) return {};
  return data_[static_cast<size_t>(k) * (degree_ + 1) + j];
}

std::vector<std::vector<cplx>> AnalyticVectorFunction::coefficients() const {
  std::vector<std::vector<cplx>> out;
  for (int k = 0; k < m_; ++k) {
    auto c = component(k);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

// BoundaryVectorFunction ---------------------------------------------------

BoundaryVectorFunction::BoundaryVectorFunction(int components, int samples,
                                               std::vector<cplx> values)
    : m_(components), g_(samples), data_(std::move(values)) {
  if (m_ < 1) fail(ErrorKind::Shape, "boundary function needs a component");
  if (g_ < 4) fail(ErrorKind::Aliasing, "boundary grid needs at least 4 samples");
  if (data_.size() != static_cast<size_t>(m_) * g_)
    fail(ErrorKind::Shape, "sample count does not match m x G");
  for (cplx v : data_)
    if (!finite(v)) fail(ErrorKind::Invalid, "non-finite boundary sample");
}

std::span<const cplx> BoundaryVectorFunction::component(int k) const {
  if (k < 0 || k >= m_) fail(ErrorKind::Shape, "component index out of range");
  return {data_.data() + static_cast<size_t>(k) * g_, static_cast<size_t>(g_)};
}

double BoundaryVectorFunction::pointwise_norm(int q) const {
  double s = 0.0;
  for (int k = 0; k < m_; ++k) s += std::norm(at(k, q));
  return std::sqrt(s);
}

cplx FourierCoefficients::at(int component, int mode) const {
  if (mode < lowest() || mode > highest()) return {};
  return modes.at(static_cast<size_t>(component))[static_cast<size_t>(mode + samples / 2)];
}

bool is_power_of_two(int value) noexcept { return value > 0 && (value & (value - 1)) == 0; }

// Series arithmetic ---------------------------------------------------------

std::vector<cplx> evaluate_polynomial(const AnalyticVectorFunction& f, cplx z) {
  std::vector<cplx> out(static_cast<size_t>(f.components()));
  for (int k = 0; k < f.components(); ++k) {
    auto c = f.component(k);
    cplx acc{};
    for (int j = f.degree(); j >= 0; --j) acc = acc * z + c[j];
    out[k] = acc;
  }
  return out;
}

std::vector<cplx> evaluate(const AnalyticVectorFunction& f, cplx z) {
  if (std::abs(z) > 1.0 + 1e-14) fail(ErrorKind::Domain, "evaluation point outside closed disc");
  return evaluate_polynomial(f, z);
}

AnalyticVectorFunction derivative(const AnalyticVectorFunction& f, int k) {
  if (k < 0) fail(ErrorKind::Degree, "negative derivative order");
  if (k > f.degree()) fail(ErrorKind::Degree, "derivative order exceeds truncation degree");
  std::vector<std::vector<cplx>> out;
  for (int c = 0; c < f.components(); ++c) {
    auto a = f.component(c);
    std::vector<cplx> d(static_cast<size_t>(f.degree() - k) + 1);
    for (int j = k; j <= f.degree(); ++j) {
      double falling = 1.0;
      for (int t = 0; t < k; ++t) falling *= static_cast<double>(j - t);
      d[j - k] = falling * a[j];
    }
    out.push_back(std::move(d));
  }
  return AnalyticVectorFunction(std::move(out));
}

AnalyticVectorFunction apply_D(const AnalyticVectorFunction& f) {
  auto c = f.coefficients();
  for (auto& comp : c)
    for (size_t j = 0; j < comp.size(); ++j) comp[j] *= static_cast<double>(j);
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction radial_dilate(const AnalyticVectorFunction& f, double r) {
  if (!(r > 0.0 && r <= 1.0)) fail(ErrorKind::Domain, "dilation radius must lie in (0,1]");
  auto c = f.coefficients();
  for (auto& comp : c) {
    double p = 1.0;
    for (auto& a : comp) {
      a *= p;
      p *= r;
    }
  }
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction truncate(const AnalyticVectorFunction& f, int degree) {
  if (degree < 0) fail(ErrorKind::Degree, "negative truncation degree");
  std::vector<std::vector<cplx>> c;
  for (int k = 0; k < f.components(); ++k) {
    std::vector<cplx> comp(static_cast<size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j) comp[j] = f.coeff_or_zero(k, j);
    c.push_back(std::move(comp));
  }
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction add(const AnalyticVectorFunction& a, const AnalyticVectorFunction& b) {
  if (a.components() != b.components()) fail(ErrorKind::Shape, "component counts differ");
  const int deg = std::max(a.degree(), b.degree());
  std::vector<std::vector<cplx>> c;
  for (int k = 0; k < a.components(); ++k) {
    std::vector<cplx> comp(static_cast<size_t>(deg) + 1);
    for (int j = 0; j <= deg; ++j) comp[j] = a.coeff_or_zero(k, j) + b.coeff_or_zero(k, j);
    c.push_back(std::move(comp));
  }
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction scale(const AnalyticVectorFunction& f, cplx s) {
  auto c = f.coefficients();
  for (auto& comp : c)
    for (auto& a : comp) a *= s;
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction subtract(const AnalyticVectorFunction& a,
                                const AnalyticVectorFunction& b) {
  return add(a, scale(b, -1.0));
}

AnalyticVectorFunction shift_up(const AnalyticVectorFunction& f) {
  auto c = f.coefficients();
  for (auto& comp : c) comp.insert(comp.begin(), cplx{});
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction multiply(const AnalyticVectorFunction& a,
                                const AnalyticVectorFunction& f, int out_degree) {
  if (a.components() != 1) fail(ErrorKind::Shape, "left factor must be scalar");
  if (out_degree < 0) fail(ErrorKind::Degree, "negative output degree");
  std::vector<std::vector<cplx>> c;
  for (int k = 0; k < f.components(); ++k)
    c.push_back(cauchy_product(a.component(0), f.component(k), out_degree));
  return AnalyticVectorFunction(std::move(c));
}

AnalyticVectorFunction dot(const AnalyticVectorFunction& g, const AnalyticVectorFunction& f,
                           int out_degree) {
  if (g.components() != f.components())
    fail(ErrorKind::Shape, "dot product of vectors with different component counts");
  if (out_degree < 0) fail(ErrorKind::Degree, "negative output degree");
  std::vector<cplx> acc(static_cast<size_t>(out_degree) + 1);
  for (int k = 0; k < f.components(); ++k) {
    auto p = cauchy_product(g.component(k), f.component(k), out_degree);
    for (int j = 0; j <= out_degree; ++j) acc[j] += p[j];
  }
  return AnalyticVectorFunction::scalar(std::move(acc));
}

AnalyticVectorFunction compose(const AnalyticVectorFunction& f,
                               const AnalyticVectorFunction& phi, int out_degree) {
  if (phi.components() != 1) fail(ErrorKind::Shape, "inner function must be scalar");
  if (out_degree < 0) fail(ErrorKind::Degree, "negative output degree");
  const double sup = sup_norm(boundary_trace(phi, boundary_grid_for(phi.degree())));
  if (sup > 1.0 + 1e-12) fail(ErrorKind::Range, "inner function leaves the closed disc");
  auto inner = phi.component(0);
  std::vector<std::vector<cplx>> out;
  for (int k = 0; k < f.components(); ++k) {
    auto a = f.component(k);
    std::vector<cplx> acc(static_cast<size_t>(out_degree) + 1);
    for (int j = f.degree(); j >= 0; --j) {
      acc = cauchy_product(acc, inner, out_degree);
      acc[0] += a[j];
    }
    out.push_back(std::move(acc));
  }
  return AnalyticVectorFunction(std::move(out));
}

// Boundary machinery ---------------------------------------------------------

BoundaryVectorFunction boundary_trace(const AnalyticVectorFunction& f, int samples) {
  if (!is_power_of_two(samples)) fail(ErrorKind::Aliasing, "boundary grid must be a power of two");
  if (samples < 2 * (f.degree() + 1))
    fail(ErrorKind::Aliasing, "boundary grid smaller than 2(N+1) samples");
  std::vector<cplx> values;
  values.reserve(static_cast<size_t>(f.components()) * samples);
  for (int k = 0; k < f.components(); ++k) {
    std::vector<cplx> buf(static_cast<size_t>(samples));
    auto a = f.component(k);
    std::copy(a.begin(), a.end(), buf.begin());
    detail::fft_backward(buf);
    values.insert(values.end(), buf.begin(), buf.end());
  }
  return BoundaryVectorFunction(f.components(), samples, std::move(values));
}

FourierCoefficients fourier_coefficients(const BoundaryVectorFunction& b) {
  const int g = b.samples();
  FourierCoefficients out;
  out.samples = g;
  for (int k = 0; k < b.components(); ++k) {
    auto s = b.component(k);
    std::vector<cplx> buf(s.begin(), s.end());
    detail::fft_forward(buf);
    std::vector<cplx> modes(static_cast<size_t>(g));
    for (int mode = -g / 2; mode < g - g / 2; ++mode) {
      const int idx = ((mode % g) + g) % g;
      modes[static_cast<size_t>(mode + g / 2)] = buf[idx] / static_cast<double>(g);
    }
    out.modes.push_back(std::move(modes));
  }
  return out;
}

BoundaryVectorFunction from_fourier(const FourierCoefficients& c) {
  const int g = c.samples;
  std::vector<cplx> values;
  for (const auto& modes : c.modes) {
    std::vector<cplx> buf(static_cast<size_t>(g));
    for (int mode = -g / 2; mode < g - g / 2; ++mode)
      buf[((mode % g) + g) % g] = modes[static_cast<size_t>(mode + g / 2)];
    detail::fft_backward(buf);
    values.insert(values.end(), buf.begin(), buf.end());
  }
  return BoundaryVectorFunction(static_cast<int>(c.modes.size()), g, std::move(values));
}

AnalyticVectorFunction analytic_part(const FourierCoefficients& c, int degree) {
  if (degree < 0 || degree > c.highest())
    fail(ErrorKind::Aliasing, "requested degree not resolved by the boundary grid");
  std::vector<std::vector<cplx>> out;
  for (size_t k = 0; k < c.modes.size(); ++k) {
    std::vector<cplx> comp(static_cast<size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j) comp[j] = c.at(static_cast<int>(k), j);
    out.push_back(std::move(comp));
  }
  return AnalyticVectorFunction(std::move(out));
}

double negative_mode_energy(const FourierCoefficients& c) {
  double neg = 0.0;
  for (size_t k = 0; k < c.modes.size(); ++k)
    for (int mode = c.lowest(); mode < 0; ++mode) neg += std::norm(c.at(static_cast<int>(k), mode));
  return neg;
}

double negative_mode_fraction(const FourierCoefficients& c) {
  double total = 0.0;
  for (const auto& modes : c.modes)
    for (cplx a : modes) total += std::norm(a);
  if (total == 0.0) return 0.0;
  return negative_mode_energy(c) / total;
}

BoundaryVectorFunction apply_D(const BoundaryVectorFunction& b) { return apply_D_power(b, 1); }

BoundaryVectorFunction apply_D_power(const BoundaryVectorFunction& b, int n) {
  if (n < 0) fail(ErrorKind::Degree, "negative power of D");
  if (n == 0) return b;
  auto c = fourier_coefficients(b);
  const int g = c.samples;
  for (auto& modes : c.modes) {
    for (int mode = -g / 2; mode < g - g / 2; ++mode) {
      // The Nyquist mode has no symmetric partner; D annihilates it.
      const double k = (mode == -g / 2) ? 0.0 : static_cast<double>(mode);
      modes[static_cast<size_t>(mode + g / 2)] *= std::pow(k, n);
    }
  }
  return from_fourier(c);
}

double sup_norm(const BoundaryVectorFunction& b) {
  double best = 0.0;
  for (int q = 0; q < b.samples(); ++q) best = std::max(best, b.pointwise_norm(q));
  return best;
}

double sup_norm_certified(const BoundaryVectorFunction& b) {
  return sup_norm(b) + std::numbers::pi * sup_norm(apply_D(b)) / b.samples();
}

NormReport norm_dnHinf(const AnalyticVectorFunction& f, int n, int samples) {
  if (n < 0) fail(ErrorKind::Degree, "negative smoothness order");
  NormReport report;
  double factorial = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) factorial *= j;
    double sup = 0.0;
    // Derivatives above the truncation degree vanish identically.
    if (j <= f.degree()) sup = sup_norm(boundary_trace(derivative(f, j), samples));
    report.per_derivative_sup.push_back(sup);
    report.weighted_sum += sup / factorial;
  }
  report.dl_norm = norm_DnLinf(f, n, samples);
  return report;
}

double norm_DnLinf(const AnalyticVectorFunction& f, int n, int samples) {
  if (n < 0) fail(ErrorKind::Degree, "negative smoothness order");
  AnalyticVectorFunction dn = f;
  for (int i = 0; i < n; ++i) dn = apply_D(dn);
  double mean = 0.0;
  for (int k = 0; k < f.components(); ++k) mean += std::norm(f.coeff(k, 0));
  return std::sqrt(mean) + sup_norm(boundary_trace(dn, samples));
}

double norm_DnLinf(const BoundaryVectorFunction& b, int n) {
  auto c = fourier_coefficients(b);
  double mean = 0.0;
  for (int k = 0; k < b.components(); ++k) mean += std::norm(c.at(k, 0));
  return std::sqrt(mean) + sup_norm(apply_D_power(b, n));
}

}  // namespace coronakit
