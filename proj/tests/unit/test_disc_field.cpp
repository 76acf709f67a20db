#include <cmath>
#include <numbers>
#include <random>

#include "coronakit/disc_field.hpp"
#include "coronakit/errors.hpp"
#include "doctest.h"

using namespace coronakit;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form solid Cauchy transform of z^a conj(z)^b on the disc.
cplx cauchy_monomial(int a, int b, cplx zeta) {
  cplx u = std::pow(zeta, a) * std::pow(std::conj(zeta), b + 1) / static_cast<double>(b + 1);
  if (a >= b + 1) u -= std::pow(zeta, a - b - 1) / static_cast<double>(b + 1);
  return u;
}

struct Density {
  std::vector<std::tuple<int, int, cplx>> terms;
  cplx operator()(cplx z) const {
    cplx v{};
    for (auto [a, b, c] : terms) v += c * std::pow(z, a) * std::pow(std::conj(z), b);
    return v;
  }
};

Density random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Density d;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) d.terms.push_back({a, b, cplx(nd(rng), nd(rng))});
  return d;
}

double relative_dbar_residual(const Density& psi, int R, int Q) {
  auto grid = make_grid(R, Q);
  auto p = DiscField::sample_scalar(grid, psi);
  auto u = cauchy_transform(p);
  return max_difference(dbar(u), p) / p.sup_norm();
}

}  // namespace

TEST_CASE("grid construction and quadrature") {
  CHECK_THROWS_AS(make_grid(3, 16), Error);
  CHECK_THROWS_AS(make_grid(16, 6), Error);
  CHECK_THROWS_AS(make_grid(16, 15), Error);

  auto g = make_grid(16, 32);
  for (int i = 0; i < g->radial(); ++i) {
    CHECK(g->radius(i) > 0.0);
    CHECK(g->radius(i) < 1.0);
    if (i > 0) CHECK(g->radius(i) > g->radius(i - 1));
  }
  CHECK(std::abs(integrate(*g, [](cplx) { return cplx(1.0); }) - kPi) < 1e-12);
  CHECK(std::abs(integrate(*g, [](cplx z) { return cplx(std::norm(z)); }) - kPi / 2) < 1e-12);

  auto g64 = make_grid(64, 32);
  CHECK(std::abs(integrate(*g64, [](cplx z) { return cplx(std::log(1.0 / std::abs(z))); }) -
                 kPi / 2) < 1e-6);
  CHECK(g->covering_radius() > 0.0);
  CHECK(g->covering_radius() < 0.2);
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(10, x, w);
  for (int p = 0; p <= 19; ++p) {
    double s = 0.0;
    for (int i = 0; i < 10; ++i) s += w[i] * std::pow(x[i], p);
    const double want = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
    CHECK(std::abs(s - want) < 1e-14);
  }
}

TEST_CASE("dbar examples") {
  auto g = make_grid(64, 128);
  auto analytic = DiscField::sample_scalar(g, [](cplx z) { return z; });
  CHECK(dbar(analytic).sup_norm() < 1e-10);
  auto conj = DiscField::sample_scalar(g, [](cplx z) { return std::conj(z); });
  auto ones = DiscField::sample_scalar(g, [](cplx) { return cplx(1.0); });
  CHECK(max_difference(dbar(conj), ones) < 1e-8);
  auto mod2 = DiscField::sample_scalar(g, [](cplx z) { return cplx(std::norm(z)); });
  CHECK(max_difference(dbar(mod2), analytic) < 1e-6);

  try {
    dbar(DiscField::sample_scalar(make_grid(5, 16), [](cplx z) { return z; }));
    FAIL("expected a stencil error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Stencil);
  }
}

TEST_CASE("Cauchy transform examples") {
  auto g = make_grid(64, 128);
  auto zero = DiscField(g, FieldShape::scalar());
  CHECK(cauchy_transform(zero).sup_norm() == 0.0);

  auto ones = DiscField::sample_scalar(g, [](cplx) { return cplx(1.0); });
  auto u = cauchy_transform(ones);
  auto conj = DiscField::sample_scalar(g, [](cplx z) { return std::conj(z); });
  CHECK(max_difference(u, conj) < 1e-4);

  auto zb = DiscField::sample_scalar(g, [](cplx z) { return std::conj(z); });
  auto v = cauchy_transform(zb);
  CHECK(max_difference(dbar(v), zb) / zb.sup_norm() < 1e-3);
}

TEST_CASE("Cauchy transform matches the closed-form monomial oracle") {
  auto g = make_grid(32, 64);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      auto psi = DiscField::sample_scalar(
          g, [&](cplx z) { return std::pow(z, a) * std::pow(std::conj(z), b); });
      auto want = DiscField::sample_scalar(g, [&](cplx z) { return cauchy_monomial(a, b, z); });
      CHECK(max_difference(cauchy_transform(psi), want) < 1e-11);
      auto ring = CauchySolver(g).apply_ring(psi, 1.0, 64);
      for (int q = 0; q < 64; ++q) {
        const cplx z = std::polar(1.0, 2.0 * kPi * q / 64);
        CHECK(std::abs(ring[0][q] - cauchy_monomial(a, b, z)) < 1e-11);
      }
    }
}

TEST_CASE("mode method agrees with the direct desingularized quadrature") {
  std::mt19937_64 rng(31);
  auto g = make_grid(48, 96);
  auto d = random_density(rng);
  auto psi = DiscField::sample_scalar(g, d);
  auto fast = cauchy_transform(psi);
  std::vector<int> targets;
  for (int i : {5, 20, 35}) targets.push_back(g->index(i, 7));
  auto slow = cauchy_transform_direct(psi, targets);
  for (size_t t = 0; t < targets.size(); ++t) {
    const cplx exact = [&] {
      cplx s{};
      for (auto [a, b, c] : d.terms) s += c * cauchy_monomial(a, b, g->point(targets[t]));
      return s;
    }();
    CHECK(std::abs(fast.at(0, targets[t]) - exact) < 1e-10 * psi.sup_norm());
    CHECK(std::abs(slow[0][t] - exact) < 2e-2 * psi.sup_norm());
  }
}

TEST_CASE("dbar inverts the Cauchy transform on random smooth densities") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 50; ++t) {
    auto d = random_density(rng);
    const double coarse = relative_dbar_residual(d, 32, 64);
    const double fine = relative_dbar_residual(d, 64, 128);
    CHECK(fine < 1e-2);
    CHECK(fine < coarse);
  }
}

TEST_CASE("Cauchy transform is linear") {
  std::mt19937_64 rng(41);
  auto g = make_grid(24, 48);
  auto p1 = DiscField::sample_scalar(g, random_density(rng));
  auto p2 = DiscField::sample_scalar(g, random_density(rng));
  const cplx a(0.3, -1.2);
  const cplx b(2.0, 0.5);
  auto lhs = cauchy_transform(linear_combination(a, p1, b, p2));
  auto rhs = linear_combination(a, cauchy_transform(p1), b, cauchy_transform(p2));
  CHECK(max_difference(lhs, rhs) < 1e-12 * std::max(1.0, lhs.sup_norm()));
}

TEST_CASE("Green's formula") {
  auto g = make_grid(64, 128);
  // u = |z|^{2p}: boundary mean 1, centre 0, d dbar u = p^2 |z|^{2p-2}.
  for (int p = 1; p <= 4; ++p) {
    auto lap = DiscField::sample_scalar(
        g, [&](cplx z) { return cplx(p * p * std::pow(std::norm(z), p - 1)); });
    auto u = DiscField::sample_scalar(g, [&](cplx z) { return cplx(std::pow(std::norm(z), p)); });
    CHECK(std::abs(green_integral(u, lap) - 1.0) < 1e-5);
  }
  auto harmonic = DiscField::sample_scalar(g, [](cplx) { return cplx(0.0); });
  CHECK(std::abs(green_integral(harmonic)) < 1e-8);
}

TEST_CASE("Littlewood-Paley identity") {
  auto g = make_grid(64, 128);
  const cplx c(0.6, -0.3);
  CHECK(std::abs(littlewood_paley_norm(AnalyticVectorFunction::scalar({c}), *g) - std::norm(c)) < 1e-15);
  for (int k = 1; k <= 8; ++k) {
    std::vector<cplx> co(static_cast<size_t>(k + 1), 0.0);
    co[k] = 1.0;
    CHECK(std::abs(littlewood_paley_norm(AnalyticVectorFunction::scalar(co), *g) - 1.0) < 1e-6);
  }
  std::mt19937_64 rng(43);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    const int deg = static_cast<int>(rng() % 17);
    std::vector<cplx> co(static_cast<size_t>(deg + 1));
    for (auto& a : co) a = {nd(rng), nd(rng)};
    auto f = AnalyticVectorFunction::scalar(co);
    const double h2 = h2_norm(f);
    CHECK(std::abs(littlewood_paley_norm(f, *g) - h2 * h2) <= 1e-5 * h2 * h2);
  }
}

TEST_CASE("h2_norm") {
  CHECK(h2_norm(AnalyticVectorFunction::scalar({0.0, 1.0})) == doctest::Approx(1.0));
  CHECK(h2_norm(AnalyticVectorFunction({{1.0, 0.0}, {0.0, 1.0}})) == doctest::Approx(std::sqrt(2.0)));
  std::mt19937_64 rng(47);
  std::normal_distribution<double> nd;
  std::vector<cplx> co(12);
  for (auto& a : co) a = {nd(rng), nd(rng)};
  auto f = AnalyticVectorFunction::scalar(co);
  auto b = boundary_trace(f, 64);
  double ms = 0.0;
  for (int q = 0; q < 64; ++q) ms += std::norm(b.at(0, q)) / 64;
  CHECK(std::abs(h2_norm(f) * h2_norm(f) - ms) < 1e-12 * ms);
}
