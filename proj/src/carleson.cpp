#include "coronakit/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coronakit/errors.hpp"
#include "detail/summation.hpp"

namespace coronakit {

namespace {

constexpr double kPi = std::numbers::pi;

// Radial cell edges: midpoints of consecutive s-nodes, squared.
std::vector<double> radial_edges(const PolarGrid& g) {
  const auto& s = g.sqrt_radii();
  std::vector<double> edges{0.0};
  for (int i = 1; i < g.radial(); ++i) {
    const double mid = 0.5 * (s[i - 1] + s[i]);
    edges.push_back(mid * mid);
  }
  edges.push_back(1.0);
  return edges;
}

int power_of_two_at_least(int n) {
  int g = 8;
  while (g < n) g *= 2;
  return g;
}

}  // namespace

MeasureSamples make_measure(GridPtr grid, std::vector<double> density) {
  if (!grid) fail(ErrorKind::Invalid, "measure without grid");
  if (density.size() != static_cast<size_t>(grid->nodes()))
    fail(ErrorKind::Shape, "density does not match the grid");
  detail::CompensatedSum mass;
  for (int node = 0; node < grid->nodes(); ++node) {
    const double w = density[node];
    if (!std::isfinite(w) || w < 0.0) fail(ErrorKind::Invalid, "density must be finite and >= 0");
    mass.add(w * grid->area_weight(node / grid->angular()));
  }
  MeasureSamples mu{std::move(grid), std::move(density), 0.0};
  mu.total_mass = mass.value();
  return mu;
}

MeasureSamples area_measure(GridPtr grid) {
  std::vector<double> d(static_cast<size_t>(grid->nodes()), 1.0);
  return make_measure(std::move(grid), std::move(d));
}

MeasureSamples log_weight_measure(const AnalyticVectorFunction& F, GridPtr grid, double scale) {
  if (!(scale >= 0.0)) fail(ErrorKind::Invalid, "measure scale must be >= 0");
  std::vector<double> d(static_cast<size_t>(grid->nodes()), 0.0);
  if (F.degree() > 0) {
    const auto dF = derivative(F, 1);
    for (int node = 0; node < grid->nodes(); ++node) {
      const cplx z = grid->point(node);
      double s = 0.0;
      for (cplx a : evaluate(dF, z)) s += std::norm(a);
      d[node] = scale * s * std::log(1.0 / std::abs(z));
    }
  }
  return make_measure(std::move(grid), std::move(d));
}

double cap_mass(const MeasureSamples& mu, cplx xi, double r, int supersample) {
  if (supersample < 1) fail(ErrorKind::Invalid, "supersample must be >= 1");
  const auto& g = *mu.grid;
  const auto edges = radial_edges(g);
  const double dtheta = 2.0 * kPi / g.angular();
  detail::CompensatedSum mass;
  for (int i = 0; i < g.radial(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    const double ri = g.radius(i);
    // Largest distance from the node to a point of its cell.
    const double reach = std::max(std::hypot(ri - lo, hi * dtheta / 2), std::hypot(hi - ri, hi * dtheta / 2));
    for (int q = 0; q < g.angular(); ++q) {
      const int node = g.index(i, q);
      const double w = mu.density[node];
      if (w == 0.0) continue;
      const double d = std::abs(g.point(i, q) - xi);
      double fraction = 0.0;
      if (d + reach <= r) {
        fraction = 1.0;
      } else if (d - reach < r) {
        double hit = 0.0;
        double total = 0.0;
        for (int a = 0; a < supersample; ++a) {
          const double rr = lo + (a + 0.5) * (hi - lo) / supersample;
          for (int b = 0; b < supersample; ++b) {
            const double th = g.angle(q) - dtheta / 2 + (b + 0.5) * dtheta / supersample;
            total += rr;
            if (std::abs(std::polar(rr, th) - xi) < r) hit += rr;
          }
        }
        fraction = hit / total;
      }
      if (fraction > 0.0) mass.add(w * g.area_weight(i) * fraction);
    }
  }
  return mass.value();
}

double box_norm(const MeasureSamples& mu, int xi_count, int r_levels, int supersample) {
  if (xi_count < 16) fail(ErrorKind::Invalid, "box norm needs at least 16 boundary points");
  if (r_levels < 0) fail(ErrorKind::Invalid, "negative number of radius levels");
  if (mu.total_mass == 0.0) return 0.0;
  double best = 0.0;
  for (int k = 0; k < xi_count; ++k) {
    const cplx xi = std::polar(1.0, 2.0 * kPi * k / xi_count);
    for (int j = 0; j <= r_levels; ++j) {
      const double r = std::ldexp(1.0, -j);
      best = std::max(best, cap_mass(mu, xi, r, supersample) / r);
    }
  }
  return best;
}

double measure_integral(const MeasureSamples& mu, const AnalyticVectorFunction& f) {
  const auto& g = *mu.grid;
  detail::CompensatedSum sum;
  for (int node = 0; node < g.nodes(); ++node) {
    const double w = mu.density[node];
    if (w == 0.0) continue;
    double s = 0.0;
    for (cplx a : evaluate(f, g.point(node))) s += std::norm(a);
    sum.add(w * g.area_weight(node / g.angular()) * s);
  }
  return sum.value();
}

std::vector<AnalyticVectorFunction> standard_test_family(int angles, int degree, int max_power) {
  std::vector<AnalyticVectorFunction> family;
  for (double modulus : {0.3, 0.5, 0.7, 0.8, 0.9}) {
    for (int k = 0; k < angles; ++k) {
      const cplx a = std::polar(modulus, 2.0 * kPi * k / angles);
      std::vector<cplx> c(static_cast<size_t>(degree) + 1);
      cplx p = 1.0;
      for (int j = 0; j <= degree; ++j) {
        c[j] = p;
        p *= std::conj(a);
      }
      family.push_back(AnalyticVectorFunction::scalar(std::move(c)));
    }
  }
  for (int k = 0; k <= max_power; ++k) {
    std::vector<cplx> c(static_cast<size_t>(k) + 1, 0.0);
    c[k] = 1.0;
    family.push_back(AnalyticVectorFunction::scalar(std::move(c)));
  }
  return family;
}

double embedding_const(const MeasureSamples& mu, const std::vector<AnalyticVectorFunction>& family) {
  if (family.empty()) fail(ErrorKind::Invalid, "empty test family");
  double best = 0.0;
  for (const auto& f : family) {
    const double h2 = h2_norm(f);
    if (!(h2 > 0.0)) fail(ErrorKind::Invalid, "test family contains the zero function");
    best = std::max(best, measure_integral(mu, f) / (h2 * h2));
  }
  return best;
}

UchiyamaReport uchiyama_bound(const DiscField& u, const DiscField& lap, int xi_count, int r_levels,
                              double u_sup_hint) {
  if (u.shape().components() != 1 || lap.shape().components() != 1)
    fail(ErrorKind::Shape, "u and its Laplacian must be scalar fields");
  if (u.grid().nodes() != lap.grid().nodes()) fail(ErrorKind::Shape, "u and lap on different grids");
  const auto& g = lap.grid();
  std::vector<double> density(static_cast<size_t>(g.nodes()));
  double u_sup = 0.0;
  for (int node = 0; node < g.nodes(); ++node) {
    const double l = lap.at(0, node).real();
    if (l < -1e-10) fail(ErrorKind::Subharmonic, "negative Laplacian sample: u is not subharmonic");
    density[node] = std::max(l, 0.0) * std::log(1.0 / std::abs(g.point(node)));
    u_sup = std::max(u_sup, std::abs(u.at(0, node)));
  }
  if (u_sup_hint > 0.0) u_sup = std::max(u_sup, u_sup_hint);
  UchiyamaReport report;
  report.box_norm = box_norm(make_measure(lap.grid_ptr(), std::move(density)), xi_count, r_levels);
  report.bound = 2.0 * kPi * std::numbers::e * u_sup * u_sup;
  return report;
}

double uchiyama_specialization(double F_sup) {
  return kPi * std::numbers::e / 2.0 * std::pow(F_sup, 4);
}

CarlesonReport carleson_report(const AnalyticVectorFunction& F, GridPtr grid,
                               const CarlesonOptions& options) {
  CarlesonReport report;
  const int G = power_of_two_at_least(std::max(options.boundary_samples, 2 * (F.degree() + 1)));
  report.F_sup = sup_norm(boundary_trace(F, G));
  const auto mu = log_weight_measure(F, grid, 1.0);
  const auto mu_lp = log_weight_measure(F, grid, 2.0 / kPi);
  const auto family = standard_test_family();
  report.total_mass = mu.total_mass;
  report.box_norm = box_norm(mu, options.xi_count, options.r_levels, options.supersample);
  report.embedding_const = embedding_const(mu, family);
  report.normalized_embedding = embedding_const(mu_lp, family);
  report.embedding_bound = 4.0 * report.F_sup * report.F_sup;
  report.uchiyama_bound = uchiyama_specialization(report.F_sup);
  report.within_bound = report.embedding_const <= report.embedding_bound + options.tolerance &&
                        report.normalized_embedding <= report.embedding_bound + options.tolerance;
  return report;
}

}  // namespace coronakit
