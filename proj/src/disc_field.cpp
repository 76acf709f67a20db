#include "coronakit/disc_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "coronakit/errors.hpp"
#include "detail/fft.hpp"
#include "detail/summation.hpp"

namespace coronakit {

namespace {

constexpr double kPi = std::numbers::pi;

// First-derivative weights at x0 for the given nodes (Fornberg's recursion).
std::array<double, 5> first_derivative_weights(double x0, const std::array<double, 5>& x) {
  constexpr int n = 5;
  double c[n][2] = {};
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = x[0] - x0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::array<double, 5> w{};
  for (int i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

int mode_slot(int mode, int q) { return ((mode % q) + q) % q; }

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) fail(ErrorKind::Invalid, "Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
}

// PolarGrid ------------------------------------------------------------------

PolarGrid::PolarGrid(int radial, int angular) : R_(radial), Q_(angular) {
  if (R_ < 4) fail(ErrorKind::Invalid, "polar grid needs at least 4 radial nodes");
  if (Q_ < 8 || Q_ % 2 != 0) fail(ErrorKind::Invalid, "polar grid needs an even Q >= 8");
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(R_, x, w);
  for (int i = 0; i < R_; ++i) {
    const double s = 0.5 * (x[i] + 1.0);
    const double ws = 0.5 * w[i];
    s_nodes_.push_back(s);
    s_weights_.push_back(ws);
    radii_.push_back(s * s);
    // r dr = 2 s^3 ds
    area_weights_.push_back(2.0 * s * s * s * ws * 2.0 * kPi / Q_);
  }
}

double PolarGrid::angle(int q) const { return 2.0 * kPi * q / Q_; }

cplx PolarGrid::point(int i, int q) const { return std::polar(radius(i), angle(q)); }

double PolarGrid::covering_radius() const {
  std::vector<double> levels{0.0};
  levels.insert(levels.end(), radii_.begin(), radii_.end());
  levels.push_back(1.0);
  const double dtheta = 2.0 * kPi / Q_;
  double worst = 0.0;
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    const double a = levels[i];
    const double b = levels[i + 1];
    worst = std::max(worst, 0.5 * std::hypot(b - a, b * dtheta));
  }
  return worst;
}

GridPtr make_grid(int radial, int angular) {
  return std::make_shared<const PolarGrid>(radial, angular);
}

// DiscField ---------------------------------------------------------------

DiscField::DiscField(GridPtr grid, FieldShape shape)
    : grid_(std::move(grid)), shape_(shape) {
  if (!grid_) fail(ErrorKind::Invalid, "field without grid");
  values_.assign(static_cast<size_t>(shape_.components()) * grid_->nodes(), cplx{});
}

DiscField::DiscField(GridPtr grid, FieldShape shape, std::vector<cplx> values)
    : grid_(std::move(grid)), shape_(shape), values_(std::move(values)) {
  if (!grid_) fail(ErrorKind::Invalid, "field without grid");
  if (values_.size() != static_cast<size_t>(shape_.components()) * grid_->nodes())
    fail(ErrorKind::Shape, "field values do not match grid and shape");
  for (cplx v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::Invalid, "non-finite field value");
}

DiscField DiscField::sample(GridPtr grid, FieldShape shape,
                            const std::function<std::vector<cplx>(cplx)>& fn) {
  DiscField out(grid, shape);
  const int nodes = grid->nodes();
  for (int node = 0; node < nodes; ++node) {
    auto v = fn(grid->point(node));
    if (static_cast<int>(v.size()) != shape.components())
      fail(ErrorKind::Shape, "sampled function returned the wrong number of entries");
    for (int c = 0; c < shape.components(); ++c) out.at(c, node) = v[c];
  }
  return out;
}

DiscField DiscField::sample_scalar(GridPtr grid, const std::function<cplx(cplx)>& fn) {
  DiscField out(grid, FieldShape::scalar());
  for (int node = 0; node < grid->nodes(); ++node) out.at(0, node) = fn(grid->point(node));
  return out;
}

std::span<const cplx> DiscField::component(int c) const {
  if (c < 0 || c >= shape_.components()) fail(ErrorKind::Shape, "field component out of range");
  return {values_.data() + static_cast<size_t>(c) * grid_->nodes(),
          static_cast<size_t>(grid_->nodes())};
}

std::span<cplx> DiscField::component(int c) {
  if (c < 0 || c >= shape_.components()) fail(ErrorKind::Shape, "field component out of range");
  return {values_.data() + static_cast<size_t>(c) * grid_->nodes(),
          static_cast<size_t>(grid_->nodes())};
}

double DiscField::pointwise_norm(int node) const {
  double s = 0.0;
  for (int c = 0; c < shape_.components(); ++c) s += std::norm(at(c, node));
  return std::sqrt(s);
}

double DiscField::sup_norm() const {
  double best = 0.0;
  for (int node = 0; node < grid_->nodes(); ++node) best = std::max(best, pointwise_norm(node));
  return best;
}

DiscField linear_combination(cplx a, const DiscField& x, cplx b, const DiscField& y) {
  if (x.grid_ptr() != y.grid_ptr() && (x.grid().radial() != y.grid().radial() ||
                                       x.grid().angular() != y.grid().angular()))
    fail(ErrorKind::Shape, "fields live on different grids");
  if (!(x.shape() == y.shape())) fail(ErrorKind::Shape, "fields have different shapes");
  std::vector<cplx> v(x.raw().size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = a * x.raw()[i] + b * y.raw()[i];
  return DiscField(x.grid_ptr(), x.shape(), std::move(v));
}

double max_difference(const DiscField& x, const DiscField& y, int skip_outer_rings) {
  if (!(x.shape() == y.shape()) || x.grid().nodes() != y.grid().nodes())
    fail(ErrorKind::Shape, "fields are not comparable");
  const auto& g = x.grid();
  double best = 0.0;
  for (int i = 0; i < g.radial() - skip_outer_rings; ++i) {
    for (int q = 0; q < g.angular(); ++q) {
      const int node = g.index(i, q);
      double s = 0.0;
      for (int c = 0; c < x.shape().components(); ++c) s += std::norm(x.at(c, node) - y.at(c, node));
      best = std::max(best, std::sqrt(s));
    }
  }
  return best;
}

cplx integrate(const DiscField& u, int component) {
  const auto& g = u.grid();
  auto vals = u.component(component);
  detail::CompensatedComplexSum sum;
  for (int i = 0; i < g.radial(); ++i) {
    detail::CompensatedComplexSum ring;
    for (int q = 0; q < g.angular(); ++q) ring.add(vals[g.index(i, q)]);
    sum.add(ring.value() * g.area_weight(i));
  }
  return sum.value();
}

cplx integrate(const PolarGrid& grid, const std::function<cplx(cplx)>& fn) {
  detail::CompensatedComplexSum sum;
  for (int i = 0; i < grid.radial(); ++i) {
    detail::CompensatedComplexSum ring;
    for (int q = 0; q < grid.angular(); ++q) ring.add(fn(grid.point(i, q)));
    sum.add(ring.value() * grid.area_weight(i));
  }
  return sum.value();
}

// d-bar --------------------------------------------------------------------

DiscField dbar(const DiscField& u) {
  const auto& g = u.grid();
  const int R = g.radial();
  const int Q = g.angular();
  if (R < 6) fail(ErrorKind::Stencil, "d-bar stencil needs at least 6 radial nodes");

  std::vector<std::array<double, 5>> weights(static_cast<size_t>(R));
  std::vector<int> starts(static_cast<size_t>(R));
  for (int i = 0; i < R; ++i) {
    const int start = std::clamp(i - 2, 0, R - 5);
    std::array<double, 5> x{};
    for (int k = 0; k < 5; ++k) x[k] = g.radius(start + k);
    weights[i] = first_derivative_weights(g.radius(i), x);
    starts[i] = start;
  }

  DiscField out(u.grid_ptr(), u.shape());
  std::vector<cplx> ring(static_cast<size_t>(Q));
  for (int c = 0; c < u.shape().components(); ++c) {
    auto vals = u.component(c);
    auto dst = out.component(c);
    for (int i = 0; i < R; ++i) {
      for (int q = 0; q < Q; ++q) ring[q] = vals[g.index(i, q)];
      detail::fft_forward(ring);
      for (int mode = -Q / 2; mode < Q / 2; ++mode) {
        const double k = (mode == -Q / 2) ? 0.0 : static_cast<double>(mode);
        ring[mode_slot(mode, Q)] *= cplx(0.0, k) / static_cast<double>(Q);
      }
      detail::fft_backward(ring);  // ring now holds d_theta u on ring i
      const double r = g.radius(i);
      for (int q = 0; q < Q; ++q) {
        cplx dr{};
        for (int k = 0; k < 5; ++k) dr += weights[i][k] * vals[g.index(starts[i] + k, q)];
        const cplx e = std::polar(0.5, g.angle(q));
        dst[g.index(i, q)] = e * (dr + cplx(0.0, 1.0 / r) * ring[q]);
      }
    }
  }
  return out;
}

// Cauchy transform ---------------------------------------------------------

CauchySolver::CauchySolver(GridPtr grid) : grid_(std::move(grid)) {
  const int R = grid_->radial();
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(R, x, w);
  // Barycentric weights for Legendre points: (-1)^i sqrt((1 - x_i^2) w_i).
  bary_.resize(static_cast<size_t>(R));
  for (int i = 0; i < R; ++i)
    bary_[i] = ((i % 2 == 0) ? 1.0 : -1.0) * std::sqrt((1.0 - x[i] * x[i]) * w[i]);
  node_ops_.reserve(static_cast<size_t>(R));
  for (int i = 0; i < R; ++i) node_ops_.push_back(build(grid_->radius(i)));
}

CauchySolver::RadialOperator CauchySolver::build(double rho) const {
  const int R = grid_->radial();
  const int Q = grid_->angular();
  const int L = R + 8;
  std::vector<double> gx;
  std::vector<double> gw;
  gauss_legendre(L, gx, gw);
  const auto& s_nodes = grid_->sqrt_radii();

  auto interpolation_row = [&](double s, std::vector<double>& row) {
    row.assign(static_cast<size_t>(R), 0.0);
    double denom = 0.0;
    for (int i = 0; i < R; ++i) {
      const double d = s - s_nodes[i];
      if (d == 0.0) {
        row.assign(static_cast<size_t>(R), 0.0);
        row[i] = 1.0;
        return;
      }
      row[i] = bary_[i] / d;
      denom += row[i];
    }
    for (double& v : row) v /= denom;
  };

  struct Piece {
    std::vector<double> r;       // quadrature radii
    std::vector<double> dr;      // weights for dr
    std::vector<double> interp;  // L x R
  };
  auto make_piece = [&](double s0, double s1) {
    Piece p;
    p.interp.reserve(static_cast<size_t>(L) * R);
    std::vector<double> row;
    for (int l = 0; l < L; ++l) {
      const double s = s0 + 0.5 * (s1 - s0) * (gx[l] + 1.0);
      const double ws = 0.5 * (s1 - s0) * gw[l];
      p.r.push_back(s * s);
      p.dr.push_back(2.0 * s * ws);
      interpolation_row(s, row);
      p.interp.insert(p.interp.end(), row.begin(), row.end());
    }
    return p;
  };

  const double s_rho = std::sqrt(rho);
  const Piece inner = make_piece(0.0, s_rho);
  const Piece outer = make_piece(s_rho, 1.0);
  const bool has_outer = rho < 1.0;

  RadialOperator op;
  op.rows.assign(static_cast<size_t>(Q) * R, 0.0);
  std::vector<double> coef(static_cast<size_t>(L));
  for (int m = -Q / 2; m < Q / 2; ++m) {
    const Piece* piece = nullptr;
    if (m < 0) {
      piece = &inner;
      for (int l = 0; l < L; ++l)
        coef[l] = 2.0 * piece->dr[l] * std::pow(piece->r[l] / rho, -m);
    } else {
      if (!has_outer) continue;
      piece = &outer;
      for (int l = 0; l < L; ++l)
        coef[l] = -2.0 * piece->dr[l] * std::pow(rho / piece->r[l], m);
    }
    double* row = op.rows.data() + static_cast<size_t>(m + Q / 2) * R;
    for (int l = 0; l < L; ++l) {
      const double* e = piece->interp.data() + static_cast<size_t>(l) * R;
      for (int i = 0; i < R; ++i) row[i] += coef[l] * e[i];
    }
  }
  return op;
}

std::vector<std::vector<cplx>> CauchySolver::angular_modes(std::span<const cplx> values) const {
  const int R = grid_->radial();
  const int Q = grid_->angular();
  std::vector<std::vector<cplx>> modes(static_cast<size_t>(R));
  std::vector<cplx> ring(static_cast<size_t>(Q));
  for (int i = 0; i < R; ++i) {
    for (int q = 0; q < Q; ++q) ring[q] = values[grid_->index(i, q)];
    detail::fft_forward(ring);
    auto& mi = modes[i];
    mi.resize(static_cast<size_t>(Q));
    for (int mode = -Q / 2; mode < Q / 2; ++mode)
      mi[mode + Q / 2] = ring[mode_slot(mode, Q)] / static_cast<double>(Q);
  }
  return modes;
}

std::vector<cplx> CauchySolver::ring_modes(const std::vector<std::vector<cplx>>& psi_modes,
                                           const RadialOperator& op) const {
  const int R = grid_->radial();
  const int Q = grid_->angular();
  std::vector<cplx> out(static_cast<size_t>(Q));
  for (int m = -Q / 2; m < Q / 2; ++m) {
    const int source = m + 1;
    if (source >= Q / 2) continue;
    const double* row = op.rows.data() + static_cast<size_t>(m + Q / 2) * R;
    cplx acc{};
    for (int i = 0; i < R; ++i) acc += row[i] * psi_modes[i][source + Q / 2];
    out[m + Q / 2] = acc;
  }
  return out;
}

DiscField CauchySolver::apply(const DiscField& psi) const {
  if (psi.grid().radial() != grid_->radial() || psi.grid().angular() != grid_->angular())
    fail(ErrorKind::Shape, "density lives on a different grid");
  const int R = grid_->radial();
  const int Q = grid_->angular();
  DiscField out(psi.grid_ptr(), psi.shape());
  std::vector<cplx> buf(static_cast<size_t>(Q));
  for (int c = 0; c < psi.shape().components(); ++c) {
    auto modes = angular_modes(psi.component(c));
    auto dst = out.component(c);
    for (int j = 0; j < R; ++j) {
      auto u = ring_modes(modes, node_ops_[j]);
      for (int m = -Q / 2; m < Q / 2; ++m) buf[mode_slot(m, Q)] = u[m + Q / 2];
      detail::fft_backward(buf);
      for (int q = 0; q < Q; ++q) dst[grid_->index(j, q)] = buf[q];
    }
  }
  return out;
}

std::vector<std::vector<cplx>> CauchySolver::apply_ring(const DiscField& psi, double radius,
                                                        int samples) const {
  if (!(radius > 0.0) || radius > 1.0 + 1e-14)
    fail(ErrorKind::Domain, "Cauchy transform target outside the closed disc");
  if (samples < 2) fail(ErrorKind::Invalid, "ring needs at least two samples");
  const int Q = grid_->angular();
  const auto op = build(std::min(radius, 1.0));
  const int keep = std::min(Q, samples) / 2;
  std::vector<std::vector<cplx>> out;
  for (int c = 0; c < psi.shape().components(); ++c) {
    auto modes = angular_modes(psi.component(c));
    auto u = ring_modes(modes, op);
    std::vector<cplx> buf(static_cast<size_t>(samples));
    for (int m = -keep; m < keep; ++m) buf[mode_slot(m, samples)] = u[m + Q / 2];
    detail::fft_backward(buf);
    out.push_back(std::move(buf));
  }
  return out;
}

DiscField cauchy_transform(const DiscField& psi) {
  return CauchySolver(psi.grid_ptr()).apply(psi);
}

std::vector<std::vector<cplx>> cauchy_transform_direct(const DiscField& psi,
                                                       std::span<const int> target_nodes) {
  const auto& g = psi.grid();
  const int nodes = g.nodes();
  std::vector<std::vector<cplx>> out;
  for (int c = 0; c < psi.shape().components(); ++c) {
    auto vals = psi.component(c);
    std::vector<cplx> u;
    for (int t : target_nodes) {
      if (t < 0 || t >= nodes) fail(ErrorKind::Domain, "target node outside the grid");
      const cplx zeta = g.point(t);
      const cplx base = vals[t];
      detail::CompensatedComplexSum sum;
      for (int node = 0; node < nodes; ++node) {
        if (node == t) continue;
        const cplx z = g.point(node);
        sum.add(g.area_weight(node / g.angular()) * (vals[node] - base) / (zeta - z));
      }
      u.push_back(base * std::conj(zeta) + sum.value() / kPi);
    }
    out.push_back(std::move(u));
  }
  return out;
}

// Identities ---------------------------------------------------------------

cplx green_integral(const DiscField& lap) {
  const auto& g = lap.grid();
  detail::CompensatedComplexSum sum;
  for (int i = 0; i < g.radial(); ++i) {
    const double w = g.area_weight(i) * std::log(1.0 / g.radius(i));
    for (int q = 0; q < g.angular(); ++q) sum.add(w * lap.at(0, g.index(i, q)));
  }
  return 2.0 / kPi * sum.value();
}

cplx green_integral(const DiscField& u, const DiscField& lap) {
  if (u.grid().nodes() != lap.grid().nodes()) fail(ErrorKind::Shape, "u and lap on different grids");
  if (lap.shape().components() != 1) fail(ErrorKind::Shape, "Green integrand must be scalar");
  return green_integral(lap);
}

double littlewood_paley_norm(const AnalyticVectorFunction& f, const PolarGrid& grid) {
  double center = 0.0;
  for (int k = 0; k < f.components(); ++k) center += std::norm(f.coeff(k, 0));
  if (f.degree() == 0) return center;
  const auto df = derivative(f, 1);
  detail::CompensatedSum sum;
  for (int i = 0; i < grid.radial(); ++i) {
    const double w = grid.area_weight(i) * std::log(1.0 / grid.radius(i));
    detail::CompensatedSum ring;
    for (int q = 0; q < grid.angular(); ++q) {
      const auto v = evaluate(df, grid.point(i, q));
      double s = 0.0;
      for (cplx a : v) s += std::norm(a);
      ring.add(s);
    }
    sum.add(w * ring.value());
  }
  return 2.0 / kPi * sum.value() + center;
}

double h2_norm(const AnalyticVectorFunction& f) {
  detail::CompensatedSum sum;
  for (int k = 0; k < f.components(); ++k)
    for (cplx a : f.component(k)) sum.add(std::norm(a));
  return std::sqrt(sum.value());
}

}  // namespace coronakit
