// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "coronakit/carleson.hpp"
#include "coronakit/corona.hpp"
#include "coronakit/disc_field.hpp"
#include "coronakit/experiments.hpp"
#include "coronakit/extension.hpp"
#include "coronakit/function_core.hpp"

using namespace coronakit;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int run(int index, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < limit_seconds, "runtime " + fmt("%.1f s", secs) + " over " + fmt("%.0f s", limit_seconds));
  std::printf("ACCEPTANCE %d: %s (%.1f s) %s\n", index, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

double trig_sup(const std::vector<std::pair<int, cplx>>& modes, int G) {
  double s = 0.0;
  for (int q = 0; q < G; ++q) {
    cplx v{};
    for (auto [k, a] : modes) v += a * std::polar(1.0, 2.0 * kPi * k * q / G);
    s = std::max(s, std::abs(v));
  }
  return s;
}

double density_residual(const std::vector<std::pair<std::pair<int, int>, cplx>>& terms, int R, int Q) {
  auto grid = make_grid(R, Q);
  auto psi = DiscField::sample_scalar(grid, [&](cplx z) {
    cplx v{};
    for (const auto& [ab, c] : terms) v += c * std::pow(z, ab.first) * std::pow(std::conj(z), ab.second);
    return v;
  });
  return max_difference(dbar(cauchy_transform(psi)), psi) / psi.sup_norm();
}

}  // namespace

int main() {
  int failures = 0;

  failures += run(1, 60, [](Outcome& o) {
    RunConfig c;
    auto rep = run_verify(c);
    for (const auto& k : rep.checks) {
      o.require(k.passed, k.name);
      if (k.name.rfind("green", 0) == 0 || k.name.rfind("littlewood", 0) == 0 || k.name.rfind("D:", 0) == 0)
        o.note(k.name + " " + fmt("%.2e", k.measured));
    }
    o.require(rep.all_passed, "identity suite");
  });

  failures += run(2, 300, [](Outcome& o) {
    auto grid = make_grid(64, 128);
    auto one = DiscField::sample_scalar(grid, [](cplx) { return cplx(1.0); });
    auto conj = DiscField::sample_scalar(grid, [](cplx z) { return std::conj(z); });
    const double constant = max_difference(cauchy_transform(one), conj);
    o.require(constant < 1e-4, "constant density");
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    int decreasing = 0;
    for (int t = 0; t < 50; ++t) {
      std::vector<std::pair<std::pair<int, int>, cplx>> terms;
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) terms.push_back({{a, b}, cplx(nd(rng), nd(rng))});
      const double base = density_residual(terms, 64, 128);
      const double fine = density_residual(terms, 128, 256);
      worst = std::max(worst, base);
      if (fine < base) ++decreasing;
    }
    o.require(worst < 1e-2, "relative d-bar residual");
    o.require(decreasing == 50, "decrease under doubling");
    o.note("constant " + fmt("%.2e", constant) + ", worst residual " + fmt("%.2e", worst) + ", decreasing " +
           std::to_string(decreasing) + "/50");
  });

  failures += run(3, 240, [](Outcome& o) {
    const AnalyticVectorFunction data[] = {AnalyticVectorFunction({{0.0, 1.0}, {0.5, 0.0}}),
                                           AnalyticVectorFunction({{0.0, 1.0}, {2.0 / 3.0, -1.0 / 3.0}})};
    for (const auto& f : data) {
      const auto start = std::chrono::steady_clock::now();
      auto s = solve_corona(f, SolveOptions{});
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      o.require(s.bezout_residual < 1e-4, "bezout residual");
      o.require(s.negative_mode_fraction < 1e-3, "negative-mode fraction");
      o.require(s.phi_identity < 1e-13, "phi.f = 1 at nodes");
      o.require(s.xi_identity < 1e-13, "f^T Xi f = 0 at nodes");
      o.require(secs < 120, "per-instance runtime");
      o.note("residual " + fmt("%.1e", s.bezout_residual) + " neg " + fmt("%.1e", s.negative_mode_fraction) +
             " phi " + fmt("%.1e", s.phi_identity) + " xi " + fmt("%.1e", s.xi_identity));
    }
  });

  failures += run(4, 60, [](Outcome& o) {
    RefineOptions ro;
    ro.terms = 10;
    auto s = refine_neumann(AnalyticVectorFunction::scalar({1.0}), AnalyticVectorFunction::scalar({1.0, 0.3}), 1.0, ro);
    const double bound = neumann_bound(0.3, 10);
    o.require(std::abs(s.refinement_log.at(0).second - 0.3) < 1e-12, "alpha norm 0.3");
    o.require(s.bezout_residual <= bound && s.bezout_residual >= bound / 2, "residual within factor 2 of bound");
    o.note("residual " + fmt("%.3e", s.bezout_residual) + " bound " + fmt("%.3e", bound));
  });

  failures += run(5, 300, [](Outcome& o) {
    auto grid = make_grid(64, 128);
    CarlesonOptions co;
    co.xi_count = 16;
    co.r_levels = 4;
    std::vector<AnalyticVectorFunction> family{AnalyticVectorFunction::scalar({0.0, 1.0}),
                                               AnalyticVectorFunction::scalar({0.0, 0.0, 1.0}),
                                               AnalyticVectorFunction::scalar({0.5, 0.5})};
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 4; ++t) {
      std::vector<cplx> c(static_cast<size_t>(2 + 2 * t));
      for (auto& v : c) v = cplx(nd(rng), nd(rng));
      auto F = AnalyticVectorFunction::scalar(c);
      family.push_back(scale(F, 1.0 / sup_norm(boundary_trace(F, 4096))));
    }
    double worst_margin = -1e300;
    for (const auto& F : family) {
      auto r = carleson_report(F, grid, co);
      o.require(r.embedding_const <= 4.0 * r.F_sup * r.F_sup + 1e-3, "embedding constant within 4 ||F||^2");
      worst_margin = std::max(worst_margin, r.embedding_const - 4.0 * r.F_sup * r.F_sup);
      auto mu = log_weight_measure(F, grid);
      const double b1 = box_norm(mu, 16, 4);
      const double b2 = box_norm(mu, 32, 4);
      o.require(std::abs(b2 - b1) <= 0.05 * std::max(b1, 1e-300) || b1 == 0.0, "box norm stability");
    }
    o.note("max(embedding - 4||F||^2) " + fmt("%.3f", worst_margin));
  });

  failures += run(6, 300, [](Outcome& o) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    int violations = 0;
    const int G = 4096;
    for (int t = 0; t < 200; ++t) {
      const int deg = 1 + static_cast<int>(rng() % 32);
      std::vector<std::pair<int, cplx>> modes, dmodes;
      for (int k = -deg; k <= deg; ++k) {
        const cplx a(nd(rng), nd(rng));
        modes.push_back({k, a});
        dmodes.push_back({k, double(k) * a});
      }
      const double f0 = std::abs(modes[static_cast<size_t>(deg)].second);
      if (trig_sup(modes, G) > kMeanValueConstant * trig_sup(dmodes, G) + f0 + 1e-12) ++violations;
    }
    o.require(violations == 0, "mean-value bound");
    int sub = 0;
    for (int t = 0; t < 100; ++t) {
      auto draw = [&] {
        std::vector<cplx> c(1 + rng() % 9);
        for (auto& v : c) v = 0.3 * cplx(nd(rng), nd(rng));
        return AnalyticVectorFunction::scalar(c);
      };
      auto a = draw();
      auto b = draw();
      auto ab = multiply(a, b, a.degree() + b.degree());
      for (int n = 0; n <= 3; ++n)
        if (norm_dnHinf(ab, n, 256).weighted_sum >
            norm_dnHinf(a, n, 256).weighted_sum * norm_dnHinf(b, n, 256).weighted_sum * (1 + 1e-12))
          ++sub;
    }
    o.require(sub == 0, "submultiplicativity");
    o.note("mean-value violations " + std::to_string(violations) + "/200, submultiplicativity violations " +
           std::to_string(sub) + "/400");
  });

  failures += run(7, 300, [](Outcome& o) {
    const AnalyticVectorFunction f({{0.0, 1.0, 0.0}, {0.5, 0.0, 0.2}});
    const auto arc = default_arc({-1.5, 1.5}, {-0.3, 0.3});
    double prev = 1e300;
    for (double r : {0.9, 0.95, 0.99}) {
      auto res = approximate_extension(f, arc, r, 1e-2, {});
      o.require(res.eps_S1 < prev, "eps_S1 decreasing in r");
      prev = res.eps_S1;
      o.note("r " + fmt("%.2f", r) + " eps " + fmt("%.2e", res.eps_S1) + " collar " +
             fmt("%.1e", res.dbar_residual_collar));
      if (r == 0.99) {
        o.require(res.eps_S1 < 1e-2, "eps_S1 < 1e-2");
        o.require(res.dbar_residual_collar < 1e-2, "collar residual");
        o.require(res.budget_met, "budget at r = 0.99");
      }
    }
    ArcSet set;
    set.S = {{-1.5, 1.5}, {1.8, 4.5}};
    set.arcs = {default_arc(set.S[0], {-0.3, 0.3}), default_arc(set.S[1], {2.9, 3.4})};
    auto multi = multi_arc_extension(f, set, 0.05, 0.95, {});
    o.require(multi.budget_met && multi.steps.size() == 2, "two-arc summed budget");
    o.note("two arcs eps " + fmt("%.2e", multi.eps_S1) + " of 0.05");
  });

  failures += run(8, 900, [](Outcome& o) {
    RunConfig c;
    EstimateOptions e;
    e.m = 3;
    e.deltas = {0.3, 0.5, 0.7};
    e.orders = {0, 1, 2};
    e.trials = 20;
    const auto first = estimate_constant(c, e);
    const auto csv = records_csv(first);
    const bool identical = csv == records_csv(estimate_constant(c, e));
    o.require(identical, "byte-identical rerun");
    auto summary = summarize(first);
    o.require(non_increasing_in_delta(summary), "max ||g|| non-increasing in delta");
    int empty = 0;
    for (const auto& r : first) empty += r.empty ? 1 : 0;
    o.require(empty == 0, "no empty rows");
    std::string cols;
    for (const auto& s : summary)
      cols += " n" + std::to_string(s.n) + "/d" + fmt("%.1f", s.delta) + "=" + fmt("%.3f", s.max_g_norm);
    o.note(std::to_string(first.size()) + " records," + cols);
  });

  return failures == 0 ? 0 : 1;
}
