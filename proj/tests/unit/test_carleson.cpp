#include <cmath>
#include <numbers>
#include <random>

#include "coronakit/carleson.hpp"
#include "coronakit/errors.hpp"
#include "doctest.h"

using namespace coronakit;

namespace {

constexpr double kPi = std::numbers::pi;

// Area of the lens {|z| < 1} intersected with {|z - xi| < r}, |xi| = 1.
double lens_area(double r) {
  const double d = 1.0;
  const double a1 = r * r * std::acos((d * d + r * r - 1.0) / (2.0 * d * r));
  const double a2 = std::acos((d * d + 1.0 - r * r) / (2.0 * d));
  const double k = 0.5 * std::sqrt((-d + r + 1.0) * (d + r - 1.0) * (d - r + 1.0) * (d + r + 1.0));
  return a1 + a2 - k;
}

AnalyticVectorFunction monomial(int k) {
  std::vector<cplx> c(static_cast<size_t>(k) + 1, 0.0);
  c[k] = 1.0;
  return AnalyticVectorFunction::scalar(c);
}

// Random polynomial rescaled so that its boundary sup is at most one.
AnalyticVectorFunction random_unit_polynomial(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> nd;
  std::vector<cplx> c(static_cast<size_t>(degree) + 1);
  for (auto& a : c) a = {nd(rng), nd(rng)};
  auto f = AnalyticVectorFunction::scalar(c);
  return scale(f, 1.0 / sup_norm_certified(boundary_trace(f, 4096)));
}

}  // namespace

TEST_CASE("log_weight_measure") {
  auto g = make_grid(64, 128);
  auto zero = log_weight_measure(AnalyticVectorFunction::scalar({2.0}), g);
  CHECK(zero.total_mass == 0.0);
  CHECK(std::abs(log_weight_measure(monomial(1), g).total_mass - kPi / 2) < 1e-6);
  CHECK(std::abs(log_weight_measure(monomial(2), g).total_mass - kPi / 2) < 1e-6);
  CHECK_THROWS_AS(make_measure(g, std::vector<double>(static_cast<size_t>(g->nodes()), -1.0)), Error);

  // Scaling covariance is exact.
  auto F = AnalyticVectorFunction({{0.1, 0.5, -0.2}, {0.0, 0.3, 0.1}});
  const cplx c(0.7, -1.1);
  auto a = log_weight_measure(F, g);
  auto b = log_weight_measure(scale(F, c), g);
  for (int node = 0; node < g->nodes(); ++node)
    CHECK(std::abs(b.density[node] - std::norm(c) * a.density[node]) <= 1e-15 * b.density[node]);
}

TEST_CASE("box_norm") {
  auto g = make_grid(32, 64);
  CHECK(box_norm(log_weight_measure(AnalyticVectorFunction::scalar({1.0}), g), 16, 4) == 0.0);

  // Area measure: the lens oracle, maximized over the same dyadic radii.
  auto area = area_measure(g);
  double oracle = 0.0;
  for (int j = 0; j <= 5; ++j) oracle = std::max(oracle, lens_area(std::ldexp(1.0, -j)) / std::ldexp(1.0, -j));
  const double measured = box_norm(area, 32, 5);
  CHECK(measured <= kPi);
  CHECK(std::abs(measured - oracle) < 0.05 * oracle);
  CHECK(std::abs(lens_area(1.0) - (2 * kPi / 3 - std::sqrt(3.0) / 2)) < 1e-12);

  // Refinement stability and monotonicity under sample-set refinement.
  auto mu = log_weight_measure(monomial(1), g);
  const double b16 = box_norm(mu, 16, 4);
  const double b32 = box_norm(mu, 32, 4);
  CHECK(b32 >= b16);
  CHECK(std::abs(b32 - b16) <= 0.05 * b16);
  CHECK(box_norm(mu, 16, 5) >= b16);

  // An off-grid peak is still captured stably.
  std::vector<double> d(static_cast<size_t>(g->nodes()));
  const cplx peak = std::polar(1.0, 0.3);
  for (int node = 0; node < g->nodes(); ++node) d[node] = 1.0 / (std::abs(g->point(node) - peak) + 0.05);
  auto mp = make_measure(g, d);
  const double p32 = box_norm(mp, 32, 5);
  const double p64 = box_norm(mp, 64, 5);
  CHECK(p64 >= p32);
  CHECK(p64 <= 1.05 * p32);
}

TEST_CASE("embedding_const") {
  auto g = make_grid(64, 128);
  auto family = standard_test_family();
  CHECK(embedding_const(log_weight_measure(AnalyticVectorFunction::scalar({1.0}), g), family) == 0.0);

  auto mu = log_weight_measure(monomial(1), g);
  CHECK(embedding_const(mu, family) <= 4.0);

  // Littlewood-Paley normalization: int |z^k|^2 (2/pi) log(1/|z|) dA = 1/(k+1)^2.
  std::vector<double> w(static_cast<size_t>(g->nodes()));
  for (int node = 0; node < g->nodes(); ++node) w[node] = 2.0 / kPi * std::log(1.0 / std::abs(g->point(node)));
  auto lp = make_measure(g, w);
  for (int k = 0; k <= 8; ++k) {
    const double v = measure_integral(lp, monomial(k));
    CHECK(std::abs(v - 1.0 / ((k + 1.0) * (k + 1.0))) < 1e-6);
    CHECK(v <= 1.0 + 1e-12);
  }

  CHECK_THROWS_AS(embedding_const(mu, {AnalyticVectorFunction::scalar({0.0, 0.0})}), Error);
  CHECK_THROWS_AS(embedding_const(mu, {}), Error);
}

TEST_CASE("vector-valued integrals reduce to component sums") {
  auto g = make_grid(32, 64);
  auto mu = log_weight_measure(AnalyticVectorFunction::scalar({0.0, 0.5, 0.5}), g);
  auto f = AnalyticVectorFunction({{1.0, 0.2, 0.0}, {0.0, 0.0, 1.0}, {0.3, -0.4, 0.1}});
  double parts = 0.0;
  for (int k = 0; k < 3; ++k) {
    std::vector<cplx> c(f.component(k).begin(), f.component(k).end());
    parts += measure_integral(mu, AnalyticVectorFunction::scalar(c));
  }
  CHECK(std::abs(measure_integral(mu, f) - parts) < 1e-12 * parts);
}

TEST_CASE("the constant-4 bound on a family of bounded F") {
  auto g = make_grid(64, 128);
  CarlesonOptions o;
  o.xi_count = 16;
  o.r_levels = 4;
  std::mt19937_64 rng(71);
  std::vector<AnalyticVectorFunction> Fs{monomial(1), monomial(2), AnalyticVectorFunction::scalar({0.5, 0.5})};
  for (int t = 0; t < 4; ++t) Fs.push_back(random_unit_polynomial(rng, 1 + t * 2));
  for (const auto& F : Fs) {
    auto r = carleson_report(F, g, o);
    CHECK(r.embedding_const <= r.embedding_bound + 1e-3);
    CHECK(r.normalized_embedding <= r.embedding_bound + 1e-3);
    CHECK(r.within_bound);
    // Equivalence with the frozen calibration constants.
    CHECK(r.embedding_const <= kBoxToEmbedding * r.box_norm);
    CHECK(r.box_norm <= kEmbeddingToBox * r.embedding_const);
  }
  auto z = carleson_report(monomial(1), g, o);
  CHECK(z.embedding_bound == doctest::Approx(4.0));
  CHECK(z.embedding_const <= z.uchiyama_bound);
  CHECK(z.uchiyama_bound == doctest::Approx(kPi * std::numbers::e / 2));
}

TEST_CASE("uchiyama_bound") {
  auto g = make_grid(32, 64);
  DiscField zero(g, FieldShape::scalar());
  auto r0 = uchiyama_bound(zero, zero, 16, 4);
  CHECK(r0.box_norm == 0.0);
  CHECK(r0.bound == 0.0);

  auto u = DiscField::sample_scalar(g, [](cplx z) { return cplx(std::norm(z)); });
  auto lap = DiscField::sample_scalar(g, [](cplx) { return cplx(4.0); });
  auto r = uchiyama_bound(u, lap, 16, 4, 1.0);
  CHECK(r.bound == doctest::Approx(2 * kPi * std::numbers::e));
  CHECK(uchiyama_bound(u, lap, 16, 4).bound <= r.bound);
  CHECK(r.box_norm > 0.0);
  CHECK(r.box_norm <= r.bound);

  auto bad = DiscField::sample_scalar(g, [](cplx) { return cplx(-1.0); });
  try {
    uchiyama_bound(u, bad, 16, 4);
    FAIL("expected a subharmonicity error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Subharmonic);
  }
}
