#include "coronakit/corona.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coronakit/errors.hpp"

namespace coronakit {

namespace {

int boundary_grid(int degree, int at_least) {
  int g = std::max(at_least, 8);
  while (!is_power_of_two(g)) ++g;
  while (g < 2 * (degree + 1)) g *= 2;
  return g;
}

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (cplx a : v) s += std::norm(a);
  return s;
}

// Values and first derivatives of f at every node.
struct NodeSamples {
  std::vector<std::vector<cplx>> f;
  std::vector<std::vector<cplx>> df;
};

NodeSamples sample_nodes(const AnalyticVectorFunction& f, const PolarGrid& grid) {
  NodeSamples s;
  const auto d = f.degree() > 0 ? derivative(f, 1) : AnalyticVectorFunction::zero(f.components(), 0);
  s.f.reserve(static_cast<size_t>(grid.nodes()));
  s.df.reserve(static_cast<size_t>(grid.nodes()));
  for (int node = 0; node < grid.nodes(); ++node) {
    const cplx z = grid.point(node);
    s.f.push_back(evaluate(f, z));
    s.df.push_back(evaluate(d, z));
  }
  return s;
}

void require_positive_modulus(const NodeSamples& s) {
  for (const auto& v : s.f)
    if (!(norm2(v) > 0.0)) fail(ErrorKind::Certification, "f vanishes at a grid node");
}

}  // namespace

double grid_min_modulus(const AnalyticVectorFunction& f, const PolarGrid& grid) {
  double best = std::sqrt(norm2(evaluate(f, 0.0)));
  for (int node = 0; node < grid.nodes(); ++node)
    best = std::min(best, std::sqrt(norm2(evaluate(f, grid.point(node)))));
  for (int q = 0; q < grid.angular(); ++q)
    best = std::min(best, std::sqrt(norm2(evaluate(f, std::polar(1.0, grid.angle(q))))));
  return best;
}

double certify_min_modulus(const AnalyticVectorFunction& f, const PolarGrid& grid) {
  const double measured = grid_min_modulus(f, grid);
  if (f.degree() == 0) return measured;
  // |f'| is subharmonic, so its sup over the disc is attained on the circle.
  const auto df = derivative(f, 1);
  const double lipschitz = sup_norm_certified(boundary_trace(df, boundary_grid(df.degree(), 1024)));
  return measured - grid.covering_radius() * lipschitz;
}

CoronaData certify(const AnalyticVectorFunction& f, const PolarGrid& grid, int order,
                   int boundary_samples) {
  CoronaData data{f, 0.0, grid_min_modulus(f, grid), {}};
  data.delta = certify_min_modulus(f, grid);
  if (!(data.delta > 0.0))
    fail(ErrorKind::Certification,
         "corona condition not certified: lower bound " + std::to_string(data.delta));
  data.norm_cert = norm_dnHinf(f, order, boundary_grid(f.degree(), boundary_samples));
  return data;
}

DiscField phi_field(const AnalyticVectorFunction& f, const GridPtr& grid) {
  const auto s = sample_nodes(f, *grid);
  require_positive_modulus(s);
  const int m = f.components();
  DiscField phi(grid, FieldShape::vector(m));
  for (int node = 0; node < grid->nodes(); ++node) {
    const double n2 = norm2(s.f[node]);
    for (int k = 0; k < m; ++k) phi.at(k, node) = std::conj(s.f[node][k]) / n2;
  }
  return phi;
}

DiscField dbar_phi(const AnalyticVectorFunction& f, const GridPtr& grid) {
  const auto s = sample_nodes(f, *grid);
  require_positive_modulus(s);
  const int m = f.components();
  DiscField out(grid, FieldShape::vector(m));
  for (int node = 0; node < grid->nodes(); ++node) {
    const auto& v = s.f[node];
    const auto& dv = s.df[node];
    const double n2 = norm2(v);
    cplx pairing{};  // (f')* f
    for (int i = 0; i < m; ++i) pairing += std::conj(dv[i]) * v[i];
    for (int k = 0; k < m; ++k)
      out.at(k, node) = std::conj(dv[k]) / n2 - pairing * std::conj(v[k]) / (n2 * n2);
  }
  return out;
}

DiscField build_Phi(const AnalyticVectorFunction& f, const GridPtr& grid) {
  const auto phi = phi_field(f, grid);
  const auto dphi = dbar_phi(f, grid);
  const int m = f.components();
  DiscField Phi(grid, FieldShape::matrix(m));
  for (int node = 0; node < grid->nodes(); ++node)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) Phi.at(j * m + k, node) = phi.at(j, node) * dphi.at(k, node);
  return Phi;
}

DiscField solve_psi(const DiscField& Phi, const CauchySolver& solver) {
  if (Phi.shape().kind != FieldKind::Matrix) fail(ErrorKind::Shape, "Phi must be a matrix field");
  return solver.apply(Phi);
}

DiscField solve_psi(const DiscField& Phi) { return solve_psi(Phi, CauchySolver(Phi.grid_ptr())); }

NodeAssembly assemble_nodes(const AnalyticVectorFunction& f, const DiscField& phi,
                            const DiscField& Psi) {
  const int m = f.components();
  if (phi.shape() != FieldShape::vector(m) || Psi.shape() != FieldShape::matrix(m))
    fail(ErrorKind::Shape, "phi and Psi do not match the component count of f");
  const auto& grid = phi.grid();
  NodeAssembly out{DiscField(phi.grid_ptr(), FieldShape::vector(m)), 0.0, 0.0, 0.0};
  std::vector<cplx> g(static_cast<size_t>(m));
  for (int node = 0; node < grid.nodes(); ++node) {
    const auto v = evaluate(f, grid.point(node));
    cplx pf{};
    for (int k = 0; k < m; ++k) pf += phi.at(k, node) * v[k];
    cplx fxf{};
    for (int j = 0; j < m; ++j) {
      g[j] = phi.at(j, node);
      for (int i = 0; i < m; ++i) {
        const cplx xi = Psi.entry(i, j, node) - Psi.entry(j, i, node);
        g[j] -= v[i] * xi;
        fxf += v[i] * xi * v[j];
      }
    }
    cplx gf{};
    for (int k = 0; k < m; ++k) {
      out.g.at(k, node) = g[k];
      gf += g[k] * v[k];
    }
    out.phi_identity = std::max(out.phi_identity, std::abs(pf - 1.0));
    out.xi_identity = std::max(out.xi_identity, std::abs(fxf));
    out.bezout_identity = std::max(out.bezout_identity, std::abs(gf - 1.0));
  }
  return out;
}

CoronaSolution assemble_g(const AnalyticVectorFunction& f, const DiscField& Phi,
                          const CauchySolver& solver, const AssembleOptions& options) {
  if (Phi.shape() != FieldShape::matrix(f.components()))
    fail(ErrorKind::Shape, "Phi has the wrong shape");
  if (!is_power_of_two(options.boundary_samples))
    fail(ErrorKind::Aliasing, "boundary grid must be a power of two");
  return assemble_g(f, solver.apply_ring(Phi, 1.0, options.boundary_samples), options);
}

CoronaSolution assemble_g(const AnalyticVectorFunction& f,
                          const std::vector<std::vector<cplx>>& psi,
                          const AssembleOptions& options) {
  const int m = f.components();
  const int G = options.boundary_samples;
  if (!is_power_of_two(G) || G < 2 * (f.degree() + 1))
    fail(ErrorKind::Aliasing, "boundary grid must be a power of two with G >= 2(N+1)");
  const int T = options.degree < 0 ? 2 * f.degree() + 16 : options.degree;
  if (T > G / 2 - 1) fail(ErrorKind::Aliasing, "truncation degree of g exceeds G/2 - 1");
  if (psi.size() != static_cast<size_t>(m) * m) fail(ErrorKind::Shape, "Psi has the wrong shape");
  for (const auto& entry : psi)
    if (entry.size() != static_cast<size_t>(G)) fail(ErrorKind::Shape, "Psi ring has wrong length");
  std::vector<cplx> values(static_cast<size_t>(m) * G);
  for (int q = 0; q < G; ++q) {
    const auto v = evaluate(f, std::polar(1.0, 2.0 * std::numbers::pi * q / G));
    const double n2 = norm2(v);
    for (int j = 0; j < m; ++j) {
      cplx gj = std::conj(v[j]) / n2;
      for (int i = 0; i < m; ++i) gj += v[i] * (psi[j * m + i][q] - psi[i * m + j][q]);
      values[static_cast<size_t>(j) * G + q] = gj;
    }
  }
  const auto modes = fourier_coefficients(BoundaryVectorFunction(m, G, std::move(values)));

  CoronaSolution sol;
  sol.antianalytic_residual = std::sqrt(negative_mode_energy(modes));
  sol.negative_mode_fraction = negative_mode_fraction(modes);
  sol.low_confidence = sol.negative_mode_fraction > options.low_confidence_fraction;
  sol.g = analytic_part(modes, T);
  const auto residual = subtract(dot(sol.g, f, T + f.degree()),
                                 AnalyticVectorFunction::scalar({1.0}));
  sol.projected_residual = sup_norm(boundary_trace(residual, boundary_grid(residual.degree(), G)));
  sol.bezout_residual = sol.projected_residual;
  sol.g_norm = norm_dnHinf(sol.g, options.order, boundary_grid(T, G));
  return sol;
}

double neumann_bound(double alpha_norm, int terms) {
  return std::pow(alpha_norm, terms + 1) / (1.0 - alpha_norm);
}

CoronaSolution refine_neumann(const AnalyticVectorFunction& f, const AnalyticVectorFunction& g_raw,
                              double r, const RefineOptions& options) {
  if (g_raw.components() != f.components()) fail(ErrorKind::Shape, "g and f differ in length");
  if (options.terms < 0) fail(ErrorKind::Invalid, "negative number of Neumann terms");
  const int N = f.degree();
  const int G = options.boundary_samples;
  int cap = options.max_degree;
  if (cap < 0) cap = std::max(g_raw.degree(), std::min(G / 2 - 1 - N, 256));

  auto alpha = subtract(dot(g_raw, f, g_raw.degree() + N), AnalyticVectorFunction::scalar({1.0}));
  const double alpha_norm =
      norm_dnHinf(alpha, options.order, boundary_grid(alpha.degree(), G)).weighted_sum;
  CoronaSolution sol;
  sol.refinement_log.push_back({r, alpha_norm});
  if (!(alpha_norm < 1.0))
    fail(ErrorKind::Refinement, "Neumann refinement refused: ||alpha|| = " +
                                    std::to_string(alpha_norm) + " >= 1");

  const auto minus_alpha = scale(alpha, -1.0);
  auto term = g_raw;
  auto total = g_raw;
  for (int k = 1; k <= options.terms; ++k) {
    const int deg = std::min(cap, term.degree() + alpha.degree());
    term = multiply(minus_alpha, term, deg);
    const int out = std::max(total.degree(), term.degree());
    total = add(truncate(total, out), truncate(term, out));
  }
  sol.g = total;
  const auto residual = subtract(dot(total, f, total.degree() + N),
                                 AnalyticVectorFunction::scalar({1.0}));
  sol.bezout_residual = sup_norm(boundary_trace(residual, boundary_grid(residual.degree(), G)));
  sol.projected_residual = sup_norm(boundary_trace(alpha, boundary_grid(alpha.degree(), G)));
  sol.g_norm = norm_dnHinf(total, options.order, boundary_grid(total.degree(), G));
  return sol;
}

CoronaSolution solve_corona(const AnalyticVectorFunction& f, const SolveOptions& options) {
  if (!(options.dilation > 0.0) || options.dilation > 1.0)
    fail(ErrorKind::Domain, "dilation must lie in (0, 1]");
  auto grid = make_grid(options.radial, options.angular);
  certify(f, *grid, options.order, options.boundary_samples);
  const auto data = radial_dilate(f, options.dilation);

  CauchySolver solver(grid);
  const auto Phi = build_Phi(data, grid);
  const auto Psi = solve_psi(Phi, solver);
  const auto nodes = assemble_nodes(data, phi_field(data, grid), Psi);

  AssembleOptions ao;
  ao.boundary_samples = options.boundary_samples;
  ao.degree = options.degree;
  ao.order = options.order;
  ao.low_confidence_fraction = options.low_confidence_fraction;
  auto raw = assemble_g(data, Phi, solver, ao);

  RefineOptions ro;
  ro.terms = options.terms;
  ro.order = options.order;
  ro.boundary_samples = options.boundary_samples;
  auto refined = refine_neumann(f, raw.g, options.dilation, ro);

  refined.projected_residual = raw.projected_residual;
  refined.antianalytic_residual = raw.antianalytic_residual;
  refined.negative_mode_fraction = raw.negative_mode_fraction;
  refined.low_confidence = raw.low_confidence;
  refined.phi_identity = nodes.phi_identity;
  refined.xi_identity = nodes.xi_identity;
  refined.node_bezout_identity = nodes.bezout_identity;
  const double scale_phi = Phi.sup_norm();
  refined.dbar_residual =
      scale_phi > 0.0 ? max_difference(dbar(Psi), Phi) / scale_phi : dbar(Psi).sup_norm();
  return refined;
}

double augmented_delta(double delta, double gamma) {
  const double s = std::hypot(delta, gamma);
  return s / (s + 1.0 - delta);
}

AugmentedData augment(const AnalyticVectorFunction& f, double delta, double gamma) {
  if (!(gamma > 0.0)) fail(ErrorKind::Domain, "augmentation needs gamma > 0");
  if (!(delta > 0.0) || delta > 1.0) fail(ErrorKind::Domain, "delta must lie in (0, 1]");
  auto coeffs = f.coefficients();
  std::vector<cplx> first(static_cast<size_t>(f.degree()) + 1, cplx{});
  first[0] = gamma;
  coeffs.insert(coeffs.begin(), std::move(first));
  AugmentedData out;
  out.f_aug = AnalyticVectorFunction(std::move(coeffs));
  out.gamma = gamma;
  out.delta_tilde = augmented_delta(delta, gamma);
  out.norm_bound = std::hypot(delta, gamma) + 1.0 - delta;
  return out;
}

}  // namespace coronakit
