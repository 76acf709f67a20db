#include "coronakit/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coronakit/disc_field.hpp"
#include "coronakit/errors.hpp"

namespace coronakit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double centre(const Interval& i) { return 0.5 * (i.lo + i.hi); }

bool inside(const Interval& inner, const Interval& outer) {
  return inner.lo > outer.lo && inner.hi < outer.hi;
}

// Unwrap `angle` next to `reference` and test membership in [lo, hi].
bool angle_in(double angle, const Interval& i) {
  const double c = centre(i);
  const double a = c + std::remainder(angle - c, kTwoPi);
  return a >= i.lo && a <= i.hi;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n == 1) return {0.5 * (a + b)};
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

int power_of_two_at_least(int n) {
  int g = 8;
  while (g < n) g *= 2;
  return g;
}

}  // namespace

bool PolarBox::contains(cplx z) const {
  const double rho = std::abs(z);
  if (rho < r.lo || rho > r.hi) return false;
  return angle_in(std::arg(z), theta);
}

double PolarBox::unwrap(double angle) const {
  const double c = centre(theta);
  return c + std::remainder(angle - c, kTwoPi);
}

ArcSpec default_arc(const Interval& host, const Interval& C) {
  const double gap = std::min(C.lo - host.lo, host.hi - C.hi);
  if (!(gap > 0.0) || !(C.hi > C.lo)) fail(ErrorKind::Invalid, "arc is not inside its S interval");
  const double pad = std::min(0.3, gap / 2.5);
  ArcSpec arc;
  arc.C = C;
  arc.U = {{C.lo - pad, C.hi + pad}, {0.85, 1.15}};
  arc.W = {{C.lo - 2.0 * pad, C.hi + 2.0 * pad}, {0.7, 1.3}};
  return arc;
}

void validate(const ArcSet& set) {
  if (set.S.empty()) fail(ErrorKind::Invalid, "S has no intervals");
  if (set.arcs.empty()) fail(ErrorKind::Invalid, "no arcs to extend across");
  for (const auto& s : set.S)
    if (!(s.hi > s.lo) || s.hi - s.lo >= kTwoPi) fail(ErrorKind::Invalid, "malformed S interval");
  for (size_t i = 0; i < set.S.size(); ++i)
    for (size_t j = i + 1; j < set.S.size(); ++j) {
      const double ci = centre(set.S[i]);
      const double d = std::abs(std::remainder(centre(set.S[j]) - ci, kTwoPi));
      if (d < 0.5 * (set.S[i].hi - set.S[i].lo + set.S[j].hi - set.S[j].lo))
        fail(ErrorKind::Invalid, "S intervals overlap");
    }
  for (const auto& a : set.arcs) {
    if (!(a.C.hi > a.C.lo)) fail(ErrorKind::Invalid, "empty arc");
    if (!inside(a.C, a.U.theta)) fail(ErrorKind::Invalid, "arc not strictly inside U");
    if (!inside(a.U.theta, a.W.theta)) fail(ErrorKind::Invalid, "U not strictly inside W in angle");
    if (!(a.W.r.lo > 0.0 && a.W.r.lo < a.U.r.lo && a.U.r.lo < 1.0 && 1.0 < a.U.r.hi &&
          a.U.r.hi < a.W.r.hi))
      fail(ErrorKind::Invalid, "radial ranges must satisfy 0 < W < U < 1 < U < W");
    bool hosted = false;
    for (const auto& s : set.S) {
      const double shift = centre(s) + std::remainder(centre(a.W.theta) - centre(s), kTwoPi) -
                           centre(a.W.theta);
      const Interval w{a.W.theta.lo + shift, a.W.theta.hi + shift};
      if (w.lo > s.lo && w.hi < s.hi) hosted = true;
    }
    if (!hosted) fail(ErrorKind::Invalid, "W meets the circle outside S");
  }
  for (size_t i = 0; i < set.arcs.size(); ++i)
    for (size_t j = i + 1; j < set.arcs.size(); ++j) {
      const auto& a = set.arcs[i].W.theta;
      const auto& b = set.arcs[j].W.theta;
      const double d = std::abs(std::remainder(centre(b) - centre(a), kTwoPi));
      if (d <= 0.5 * (a.hi - a.lo + b.hi - b.lo)) fail(ErrorKind::Invalid, "arcs overlap");
    }
}

// Jet extension ---------------------------------------------------------------

JetExtension::JetExtension(const AnalyticVectorFunction& f, int order) : f_(f), order_(order) {
  if (order < 0) fail(ErrorKind::Degree, "negative extension order");
  for (int j = 0; j <= order + 1; ++j)
    derivatives_.push_back(j <= f.degree() ? derivative(f, j)
                                           : AnalyticVectorFunction::zero(f.components(), 0));
}

void JetExtension::eval(cplx z, cplx* out) const {
  const int m = f_.components();
  const double rho = std::abs(z);
  if (rho <= 1.0) {
    for (int k = 0; k < m; ++k) {
      auto a = f_.component(k);
      cplx acc{};
      for (int j = f_.degree(); j >= 0; --j) acc = acc * z + a[j];
      out[k] = acc;
    }
    return;
  }
  const cplx u = z / rho;
  const double t = rho - 1.0;
  for (int k = 0; k < m; ++k) out[k] = 0.0;
  double weight = 1.0;
  cplx rot = 1.0;
  for (int j = 0; j <= order_; ++j) {
    if (j > 0) {
      weight *= t / j;
      rot *= u;
    }
    const auto& d = derivatives_[j];
    for (int k = 0; k < m; ++k) {
      auto a = d.component(k);
      cplx acc{};
      for (int i = d.degree(); i >= 0; --i) acc = acc * u + a[i];
      out[k] += weight * rot * acc;
    }
  }
}

void JetExtension::eval_dbar(cplx z, cplx* out) const {
  const int m = f_.components();
  for (int k = 0; k < m; ++k) out[k] = 0.0;
  const double rho = std::abs(z);
  if (rho <= 1.0) return;
  // With u = e^{i theta}, t = rho - 1 and P = sum_j t^j/j! u^j f^{(j)}(u):
  // d_rho P = sum_{j>=1} t^{j-1}/(j-1)! u^j f^{(j)}(u) and
  // d_theta P = i sum_j t^j/j! (j u^j f^{(j)}(u) + u^{j+1} f^{(j+1)}(u)).
  const cplx u = z / rho;
  const double t = rho - 1.0;
  const cplx I(0.0, 1.0);
  std::vector<cplx> d_rho(static_cast<size_t>(m));
  std::vector<cplx> d_theta(static_cast<size_t>(m));
  auto value = [&](int j, int k) {
    const auto& d = derivatives_[j];
    auto a = d.component(k);
    cplx acc{};
    for (int i = d.degree(); i >= 0; --i) acc = acc * u + a[i];
    return acc;
  };
  double weight = 1.0;  // t^j / j!
  cplx rot = 1.0;       // u^j
  for (int j = 0; j <= order_ + 1; ++j) {
    if (j > 0) {
      weight *= t / j;
      rot *= u;
    }
    for (int k = 0; k < m; ++k) {
      const cplx fj = value(j, k);
      if (j <= order_) d_theta[k] += I * weight * static_cast<double>(j) * rot * fj;
      if (j >= 1) d_theta[k] += I * (weight * j / t) * rot * fj;
      if (j >= 1 && j <= order_) d_rho[k] += (weight * j / t) * rot * fj;
    }
  }
  for (int k = 0; k < m; ++k) out[k] = 0.5 * u * (d_rho[k] + (I / rho) * d_theta[k]);
}

std::vector<cplx> JetExtension::operator()(cplx z) const {
  std::vector<cplx> out(static_cast<size_t>(components()));
  eval(z, out.data());
  return out;
}

std::vector<std::vector<cplx>> radial_extension(const AnalyticVectorFunction& f, int order,
                                                const ArcSet& set, const std::vector<cplx>& points) {
  JetExtension P(f, order);
  std::vector<std::vector<cplx>> out;
  for (cplx z : points) {
    if (std::abs(z) > 1.0) {
      bool ok = false;
      for (const auto& s : set.S) ok = ok || angle_in(std::arg(z), s);
      if (!ok) fail(ErrorKind::Domain, "collar point outside the sector over S");
    }
    out.push_back(P(z));
  }
  return out;
}

// Cutoff --------------------------------------------------------------------

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = smooth_step(t);
  if (s == 0.0 || s == 1.0) return 0.0;
  return s * (1.0 - s) * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)));
}

SmoothBump::SmoothBump(const PolarBox& U, const PolarBox& W, double amplitude)
    : U_(U), W_(W), amplitude_(amplitude) {
  if (!inside(U.theta, W.theta) || !(W.r.lo < U.r.lo && U.r.hi < W.r.hi))
    fail(ErrorKind::Invalid, "cutoff needs U strictly inside W");
}

double SmoothBump::ramp(double x, double out_lo, double in_lo, double in_hi, double out_hi,
                        double* deriv) const {
  *deriv = 0.0;
  if (x <= out_lo || x >= out_hi) return 0.0;
  if (x < in_lo) {
    const double w = in_lo - out_lo;
    *deriv = smooth_step_derivative((x - out_lo) / w) / w;
    return smooth_step((x - out_lo) / w);
  }
  if (x > in_hi) {
    const double w = out_hi - in_hi;
    *deriv = -smooth_step_derivative((out_hi - x) / w) / w;
    return smooth_step((out_hi - x) / w);
  }
  return 1.0;
}

double SmoothBump::value(cplx z) const {
  if (amplitude_ == 0.0) return 0.0;
  const double th = W_.unwrap(std::arg(z));
  const double rho = std::abs(z);
  double dA = 0.0;
  double dB = 0.0;
  const double A = ramp(th, W_.theta.lo, U_.theta.lo, U_.theta.hi, W_.theta.hi, &dA);
  if (A == 0.0) return 0.0;
  return amplitude_ * A * ramp(rho, W_.r.lo, U_.r.lo, U_.r.hi, W_.r.hi, &dB);
}

cplx SmoothBump::dbar(cplx z) const {
  if (amplitude_ == 0.0) return 0.0;
  const double rho = std::abs(z);
  if (rho <= W_.r.lo || rho >= W_.r.hi) return 0.0;
  const double th = W_.unwrap(std::arg(z));
  double dA = 0.0;
  double dB = 0.0;
  const double A = ramp(th, W_.theta.lo, U_.theta.lo, U_.theta.hi, W_.theta.hi, &dA);
  if (A == 0.0 && dA == 0.0) return 0.0;
  const double B = ramp(rho, W_.r.lo, U_.r.lo, U_.r.hi, W_.r.hi, &dB);
  const cplx e = z / rho;
  return amplitude_ * 0.5 * e * (A * dB + cplx(0.0, 1.0 / rho) * dA * B);
}

// Correction ----------------------------------------------------------------

Correction::Correction(SmoothBump bump, Data E, Data dbar_E, int components,
                       QuadratureOptions quad)
    : bump_(std::move(bump)), E_(std::move(E)), dbar_E_(std::move(dbar_E)), m_(components),
      quad_(quad) {
  if (components < 1) fail(ErrorKind::Shape, "correction needs at least one component");
  if (quad.angles < 8 || quad.points < 2) fail(ErrorKind::Invalid, "quadrature too coarse");
  gauss_legendre(quad.points, gx_, gw_);
}

void Correction::ray(cplx zeta, cplx e, cplx* out, std::vector<double>& breaks,
                     std::vector<cplx>& val) const {
  for (int k = 0; k < m_; ++k) out[k] = 0.0;
  const PolarBox& U = bump_.inner();
  const PolarBox& W = bump_.outer();
  const double z2 = std::norm(zeta);
  const double b = std::real(std::conj(zeta) * e);
  const double disc_out = b * b - z2 + W.r.hi * W.r.hi;
  if (disc_out <= 0.0) return;
  const double end = -b + std::sqrt(disc_out);
  if (end <= 0.0) return;
  breaks.assign({0.0, end});
  for (double c : {1.0, U.r.hi}) {
    const double d = b * b - z2 + c * c;
    if (d <= 0.0) continue;
    const double sq = std::sqrt(d);
    for (double root : {-b - sq, -b + sq})
      if (root > 0.0 && root < end) breaks.push_back(root);
  }
  for (double w : {W.theta.lo, U.theta.lo, U.theta.hi, W.theta.hi}) {
    const cplx dir = std::polar(1.0, -w);
    const double den = std::imag(dir * e);
    if (std::abs(den) < 1e-300) continue;
    const double root = -std::imag(dir * zeta) / den;
    if (root > 0.0 && root < end && std::real(dir * (zeta + root * e)) > 0.0)
      breaks.push_back(root);
  }
  std::sort(breaks.begin(), breaks.end());
  for (size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    if (hi - lo < 1e-15) continue;
    const cplx mid = zeta + 0.5 * (lo + hi) * e;
    if (std::abs(mid) <= 1.0 || !W.contains(mid)) continue;
    const double half = 0.5 * (hi - lo);
    for (size_t q = 0; q < gx_.size(); ++q) {
      const cplx z = zeta + (0.5 * (lo + hi) + half * gx_[q]) * e;
      const double phi = bump_.value(z);
      if (phi == 0.0) continue;
      dbar_E_(z, val.data());
      for (int k = 0; k < m_; ++k) out[k] += half * gw_[q] * phi * val[k];
    }
  }
}

std::vector<cplx> Correction::h(cplx zeta) const {
  std::vector<cplx> acc(static_cast<size_t>(m_));
  if (bump_.amplitude() == 0.0) return acc;
  std::vector<double> breaks;
  std::vector<cplx> val(static_cast<size_t>(m_));
  std::vector<cplx> r(static_cast<size_t>(m_));
  const int M = quad_.angles;
  const double mod = std::abs(zeta);
  if (mod <= 1.0 + 1e-12) {
    // Rays from the closed disc never graze the circle from outside, so the
    // periodic trapezoid rule stays accurate.
    for (int a = 0; a < M; ++a) {
      const cplx e = std::polar(1.0, kTwoPi * (a + 0.5) / M);
      ray(zeta, e, r.data(), breaks, val);
      for (int k = 0; k < m_; ++k) acc[k] += (kTwoPi / M) * r[k] * std::conj(e);
    }
  } else {
    // Split at the two directions tangent to the unit circle, where the
    // angular integrand has square-root endpoints, and cluster nodes there
    // with the map x -> (3x - x^3)/2.
    const double base = std::arg(-zeta);
    const double spread = mod > 1.0 ? std::asin(std::min(1.0, 1.0 / mod)) : 0.5 * kPi;
    const double cuts[] = {base - spread, base + spread, base - spread + kTwoPi};
    for (int piece = 0; piece < 2; ++piece) {
      const double lo = cuts[piece];
      const double hi = cuts[piece + 1];
      const int n = std::max(8, static_cast<int>(std::ceil(M * (hi - lo) / kTwoPi)));
      std::vector<double> x;
      std::vector<double> w;
      gauss_legendre(n, x, w);
      const double c = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      for (int q = 0; q < n; ++q) {
        const double alpha = c + half * 0.5 * (3.0 * x[q] - x[q] * x[q] * x[q]);
        const double jac = half * 1.5 * (1.0 - x[q] * x[q]);
        const cplx e = std::polar(1.0, alpha);
        ray(zeta, e, r.data(), breaks, val);
        for (int k = 0; k < m_; ++k) acc[k] += w[q] * jac * r[k] * std::conj(e);
      }
    }
  }
  // C[psi](zeta) = -(1/pi) int int psi(zeta + s e^{ia}) e^{-ia} ds da.
  for (auto& v : acc) v *= -1.0 / kPi;
  return acc;
}

std::vector<cplx> Correction::remainder(cplx zeta) const {
  std::vector<cplx> out(static_cast<size_t>(m_));
  E_(zeta, out.data());
  auto hv = h(zeta);
  for (int k = 0; k < m_; ++k) out[k] -= hv[k];
  return out;
}

std::vector<cplx> Correction::dilation_gap(cplx z, double r) const {
  auto a = h(r * z);
  auto b = h(z);
  for (int k = 0; k < m_; ++k) a[k] -= b[k];
  return a;
}

double contour_dbar(const std::function<std::vector<cplx>(cplx)>& F, cplx zeta, double tau,
                    int points) {
  if (!(tau > 0.0) || points < 4) fail(ErrorKind::Invalid, "contour estimator needs tau > 0");
  std::vector<cplx> coef;
  for (int q = 0; q < points; ++q) {
    const cplx e = std::polar(1.0, kTwoPi * q / points);
    auto v = F(zeta + tau * e);
    if (coef.empty()) coef.assign(v.size(), cplx{});
    for (size_t k = 0; k < v.size(); ++k) coef[k] += v[k] * e;
  }
  double s = 0.0;
  for (auto c : coef) s += std::norm(c / static_cast<double>(points));
  return std::sqrt(s) / tau;
}

// Checkpoints ---------------------------------------------------------------

namespace {

std::vector<cplx> disc_checkpoints(const ArcSpec& arc, double tau, int count) {
  const int nt = std::max(4, count / 3);
  std::vector<cplx> pts;
  for (double th : linspace(arc.W.theta.lo, arc.W.theta.hi, nt))
    for (double rho : {0.5 * (arc.W.r.lo + arc.U.r.lo), arc.U.r.lo, 1.0 - 1.5 * tau})
      pts.push_back(std::polar(rho, th));
  pts.push_back(0.0);
  return pts;
}

double collar_radius(const ArcSpec& arc, double r, double tau) {
  return std::min(tau, 0.4 * (std::min(arc.U.r.hi, 1.0 / r) - 1.0));
}

std::vector<cplx> collar_checkpoints(const ArcSpec& arc, double r, double tau, int count) {
  const int nt = std::max(4, count / 3);
  const double top = std::min(arc.U.r.hi, 1.0 / r) - 1.5 * tau;
  std::vector<double> levels{1.0};
  if (top > 1.0) {
    levels.push_back(0.5 * (1.0 + top));
    levels.push_back(top);
  }
  std::vector<cplx> pts;
  for (double th : linspace(arc.U.theta.lo + 1.5 * tau, arc.U.theta.hi - 1.5 * tau, nt))
    for (double rho : levels) pts.push_back(std::polar(rho, th));
  return pts;
}

Correction make_correction(const JetExtension& P, const ArcSpec& arc, const QuadratureOptions& q) {
  return Correction(SmoothBump(arc.U, arc.W), [&P](cplx z, cplx* out) { P.eval(z, out); },
                    [&P](cplx z, cplx* out) { P.eval_dbar(z, out); }, P.components(), q);
}

struct Attempt {
  AnalyticVectorFunction series = AnalyticVectorFunction::zero(1, 0);
  double eps = 0.0;
  double negative_fraction = 0.0;
  double dbar_disc = 0.0;
  double dbar_collar = 0.0;
};

// Disc Taylor series of h(r z) - h(z) from circle samples.
AnalyticVectorFunction disc_series(const Correction& c, double r, int samples, double* negative) {
  const int m = c.components();
  std::vector<cplx> values(static_cast<size_t>(m) * samples);
  for (int q = 0; q < samples; ++q) {
    auto v = c.dilation_gap(std::polar(1.0, kTwoPi * q / samples), r);
    for (int k = 0; k < m; ++k) values[static_cast<size_t>(k) * samples + q] = v[k];
  }
  auto modes = fourier_coefficients(BoundaryVectorFunction(m, samples, std::move(values)));
  *negative = negative_mode_fraction(modes);
  return analytic_part(modes, samples / 2 - 1);
}

// Contour estimates of d-bar of the disc correction and of E - h + h(r .) on
// the collar, both computed from the correction c.
void certificates(const JetExtension& P, const Correction& c, const ArcSpec& arc, double r,
                  const ExtensionOptions& o, double* disc, double* collar) {
  const double tau = o.contour_radius;
  auto gap = [&](cplx z) { return c.dilation_gap(z, r); };
  *disc = 0.0;
  for (cplx z : disc_checkpoints(arc, tau, o.checks_per_region))
    *disc = std::max(*disc, contour_dbar(gap, z, tau, o.contour_points));
  const double tc = collar_radius(arc, r, tau);
  auto local = [&](cplx z) {
    auto v = P(z);
    auto g = c.dilation_gap(z, r);
    for (size_t k = 0; k < v.size(); ++k) v[k] += g[k];
    return v;
  };
  *collar = 0.0;
  for (cplx z : collar_checkpoints(arc, r, tc, o.checks_per_region))
    *collar = std::max(*collar, contour_dbar(local, z, tc, o.contour_points));
}

Attempt attempt(const JetExtension& P, const Correction& c, const ArcSpec& arc, double r,
                const ExtensionOptions& o) {
  Attempt a;
  const int G = power_of_two_at_least(o.boundary_samples);
  a.series = disc_series(c, r, G, &a.negative_fraction);
  a.eps = norm_dnHinf(a.series, o.order, 2 * G).weighted_sum;
  certificates(P, c, arc, r, o, &a.dbar_disc, &a.dbar_collar);
  // The contour estimate divides quadrature error by the contour radius, which
  // shrinks with 1 - r; a failed certificate is re-measured on finer rules.
  QuadratureOptions q = o.quad;
  for (int k = 0; k < o.certificate_refinements; ++k) {
    if (a.dbar_disc < o.dbar_tolerance && a.dbar_collar < o.dbar_tolerance) break;
    q.angles *= 2;
    q.points += 8;
    certificates(P, make_correction(P, arc, q), arc, r, o, &a.dbar_disc, &a.dbar_collar);
  }
  return a;
}

struct Placed {
  Correction correction;
  ArcSpec arc;
  double r;
};

std::vector<cplx> evaluate_F(const JetExtension& P, const std::vector<Placed>& steps, cplx z) {
  auto v = P(z);
  for (const auto& s : steps) {
    auto g = s.correction.dilation_gap(z, s.r);
    for (size_t k = 0; k < v.size(); ++k) v[k] += g[k];
  }
  return v;
}

// Bulge profile: 1 on C, smooth ramps of width eta, 0 beyond.
double bulge_profile(const ArcSpec& arc, double theta, double eta) {
  const double c = centre(arc.C);
  const double t = c + std::remainder(theta - c, kTwoPi);
  if (t <= arc.C.lo - eta || t >= arc.C.hi + eta) return 0.0;
  if (t < arc.C.lo) return smooth_step((t - arc.C.lo + eta) / eta);
  if (t > arc.C.hi) return smooth_step((arc.C.hi + eta - t) / eta);
  return 1.0;
}

double bulge_eta(const ArcSpec& arc) {
  return 0.5 * std::min(arc.C.lo - arc.U.theta.lo, arc.U.theta.hi - arc.C.hi);
}

double bulge_kappa(const ArcSpec& arc, double r) {
  return 0.5 * (std::min(arc.U.r.hi, 1.0 / r) - 1.0);
}

// Sup-based norm of F on the disc enlarged by bulges of height scale * kappa:
// circle values come from the disc series, bulge values from F directly and
// its derivatives from Cauchy integrals on circles that stay inside the
// region where F is holomorphic.
double enlarged_norm(const JetExtension& P, const std::vector<Placed>& steps,
                     const AnalyticVectorFunction& F_disc, int n, int samples, double scale) {
  std::vector<double> sup(static_cast<size_t>(n) + 1, 0.0);
  for (int j = 0; j <= n; ++j)
    if (j <= F_disc.degree()) sup[j] = sup_norm(boundary_trace(derivative(F_disc, j), samples));
  for (const auto& s : steps) {
    const double eta = bulge_eta(s.arc);
    const double kappa = bulge_kappa(s.arc, s.r);
    const double radius = 0.4 * std::min(kappa, eta);
    for (double th : linspace(s.arc.C.lo - eta, s.arc.C.hi + eta, 24)) {
      const cplx z = std::polar(1.0 + scale * kappa * bulge_profile(s.arc, th, eta), th);
      auto v = evaluate_F(P, steps, z);
      double m0 = 0.0;
      for (auto c : v) m0 += std::norm(c);
      sup[0] = std::max(sup[0], std::sqrt(m0));
      if (n == 0) continue;
      const int pts = 32;
      std::vector<std::vector<cplx>> d(static_cast<size_t>(n) + 1,
                                       std::vector<cplx>(v.size(), cplx{}));
      for (int q = 0; q < pts; ++q) {
        const cplx e = std::polar(1.0, kTwoPi * q / pts);
        auto w = evaluate_F(P, steps, z + radius * e);
        for (int j = 1; j <= n; ++j) {
          const cplx factor = std::pow(radius * e, -j);
          for (size_t k = 0; k < w.size(); ++k) d[j][k] += w[k] * factor;
        }
      }
      double fact = 1.0;
      for (int j = 1; j <= n; ++j) {
        fact *= j;
        double mj = 0.0;
        for (auto c : d[j]) mj += std::norm(c * fact / static_cast<double>(pts));
        sup[j] = std::max(sup[j], std::sqrt(mj));
      }
    }
  }
  double fact = 1.0;
  double norm = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) fact *= j;
    norm += sup[j] / fact;
  }
  return norm;
}

// Builds the enlarged domain and evaluates F on its collar.
// The bulges are thinned until the norm of F on the enlarged domain exceeds
// the norm of f by at most the disc gap.
void finish(const AnalyticVectorFunction& f, const JetExtension& P, const std::vector<Placed>& steps,
            const ExtensionOptions& o, ExtensionResult& res) {
  const int n = o.order;
  const int samples = 2 * power_of_two_at_least(o.boundary_samples);
  res.f_norm = norm_dnHinf(f, n, power_of_two_at_least(2 * (f.degree() + 1))).weighted_sum;
  double scale = 1.0;
  res.F_norm = enlarged_norm(P, steps, res.F_disc, n, samples, scale);
  for (int k = 0; k < 8 && res.F_norm > res.f_norm + res.eps_S1; ++k) {
    scale *= 0.5;
    res.F_norm = enlarged_norm(P, steps, res.F_disc, n, samples, scale);
  }
  res.eps_S3 = std::abs(res.F_norm - res.f_norm);

  const int T = 512;
  auto& dom = res.domain;
  dom.theta.clear();
  dom.rho.clear();
  for (int q = 0; q < T; ++q) {
    const double th = kTwoPi * q / T;
    double rho = 1.0;
    for (const auto& s : steps)
      rho += scale * bulge_kappa(s.arc, s.r) * bulge_profile(s.arc, th, bulge_eta(s.arc));
    dom.theta.push_back(th);
    dom.rho.push_back(rho);
  }
  std::vector<double> diff = dom.rho;
  const double h = kTwoPi / T;
  dom.max_divided_difference.clear();
  for (int k = 0; k <= n + 2; ++k) {
    double mx = 0.0;
    for (double v : diff) mx = std::max(mx, std::abs(v));
    dom.max_divided_difference.push_back(mx);
    std::vector<double> next(diff.size());
    for (size_t q = 0; q < diff.size(); ++q) next[q] = (diff[(q + 1) % diff.size()] - diff[q]) / h;
    diff = std::move(next);
  }

  dom.collar.clear();
  for (const auto& s : steps) {
    const double tc = collar_radius(s.arc, s.r, o.contour_radius);
    for (cplx z : collar_checkpoints(s.arc, s.r, tc, o.checks_per_region)) dom.collar.push_back(z);
  }
  res.collar_values.clear();
  for (cplx z : dom.collar) res.collar_values.push_back(evaluate_F(P, steps, z));
}

ExtensionResult run(const AnalyticVectorFunction& f, const ArcSet& set, double eps, double r,
                    bool raise, const ExtensionOptions& o) {
  if (!(eps > 0.0)) fail(ErrorKind::Invalid, "budget must be positive");
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::Domain, "dilation r must lie in (0, 1)");
  validate(set);
  JetExtension P(f, o.order);
  ExtensionResult res;
  res.budget = eps;
  std::vector<Placed> steps;
  AnalyticVectorFunction total = AnalyticVectorFunction::zero(f.components(), 0);
  const bool single = set.arcs.size() == 1 && !raise;
  for (size_t i = 0; i < set.arcs.size(); ++i) {
    const auto& arc = set.arcs[i];
    ExtensionStep step;
    step.index = static_cast<int>(i) + 1;
    step.budget = single ? eps : eps * std::ldexp(1.0, -step.index);
    double ri = r;
    Correction c = make_correction(P, arc, o.quad);
    Attempt a;
    for (int k = 0;; ++k) {
      a = attempt(P, c, arc, ri, o);
      step.attempts = k + 1;
      step.r = ri;
      step.eps_S1 = a.eps;
      step.dbar_disc = a.dbar_disc;
      step.dbar_collar = a.dbar_collar;
      step.met = a.eps < step.budget && a.dbar_disc < o.dbar_tolerance &&
                 a.dbar_collar < o.dbar_tolerance;
      if (step.met || !raise || k >= o.max_raises) break;
      ri = 1.0 - 0.5 * (1.0 - ri);
    }
    res.steps.push_back(step);
    res.dbar_residual_disc = std::max(res.dbar_residual_disc, a.dbar_disc);
    res.dbar_residual_collar = std::max(res.dbar_residual_collar, a.dbar_collar);
    res.negative_mode_fraction = std::max(res.negative_mode_fraction, a.negative_fraction);
    total = add(total, a.series);
    steps.push_back({std::move(c), arc, ri});
    if (!step.met) {
      res.failed_step = step.index;
      break;
    }
  }
  const int G = power_of_two_at_least(o.boundary_samples);
  res.eps_S1 = norm_dnHinf(total, o.order, 2 * G).weighted_sum;
  res.F_disc = add(f, total);
  res.budget_met = res.failed_step < 0 && res.eps_S1 < eps;
  finish(f, P, steps, o, res);
  return res;
}

}  // namespace

CorrectionReport correction_report(const Correction& c, const ArcSpec& arc,
                                   const ExtensionOptions& options) {
  CorrectionReport rep;
  const double tau = options.contour_radius;
  auto h = [&](cplx z) { return c.h(z); };
  for (cplx z : disc_checkpoints(arc, tau, options.checks_per_region)) {
    rep.dbar_h_disc = std::max(rep.dbar_h_disc, contour_dbar(h, z, tau, options.contour_points));
    ++rep.checkpoints;
  }
  auto rest = [&](cplx z) { return c.remainder(z); };
  const int nt = std::max(4, options.checks_per_region / 3);
  for (double th : linspace(arc.U.theta.lo + 1.5 * tau, arc.U.theta.hi - 1.5 * tau, nt))
    for (double rho : linspace(arc.U.r.lo + 1.5 * tau, arc.U.r.hi - 1.5 * tau, 3)) {
      rep.dbar_E_minus_h_U = std::max(
          rep.dbar_E_minus_h_U, contour_dbar(rest, std::polar(rho, th), tau, options.contour_points));
      ++rep.checkpoints;
    }
  return rep;
}

ExtensionResult approximate_extension(const AnalyticVectorFunction& f, const ArcSpec& arc, double r,
                                      double budget, const ExtensionOptions& options) {
  ArcSet set;
  set.S = {{arc.W.theta.lo - 1e-9, arc.W.theta.hi + 1e-9}};
  set.arcs = {arc};
  return run(f, set, budget, r, false, options);
}

ExtensionResult multi_arc_extension(const AnalyticVectorFunction& f, const ArcSet& set, double eps,
                                    double r, const ExtensionOptions& options) {
  return run(f, set, eps, r, true, options);
}

}  // namespace coronakit
