#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "coronakit/carleson.hpp"
#include "coronakit/cli.hpp"
#include "coronakit/corona.hpp"
#include "coronakit/errors.hpp"
#include "coronakit/experiments.hpp"

namespace py = pybind11;
using namespace coronakit;

namespace {

using Coeffs = std::vector<std::vector<cplx>>;

Coeffs coefficients(const AnalyticVectorFunction& f) {
  Coeffs out;
  for (int k = 0; k < f.components(); ++k) {
    auto c = f.component(k);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_coronakit, m) {
  m.doc() = "Numerical corona problem toolkit";

  py::register_exception<Error>(m, "CoronaError", PyExc_ValueError);

  m.def(
      "solve",
      [](const Coeffs& f, int radial, int angular, int boundary_samples, int degree, int order) {
        SolveOptions o;
        o.radial = radial;
        o.angular = angular;
        o.boundary_samples = boundary_samples;
        o.degree = degree;
        o.order = order;
        auto s = solve_corona(AnalyticVectorFunction(f), o);
        py::dict d;
        d["g"] = coefficients(s.g);
        d["bezout_residual"] = s.bezout_residual;
        d["dbar_residual"] = s.dbar_residual;
        d["negative_mode_fraction"] = s.negative_mode_fraction;
        d["low_confidence"] = s.low_confidence;
        d["g_norm"] = s.g_norm.weighted_sum;
        return d;
      },
      py::arg("f"), py::arg("radial") = 64, py::arg("angular") = 128, py::arg("boundary_samples") = 4096,
      py::arg("degree") = -1, py::arg("order") = 0,
      "Solve g.f = 1 for polynomial data given as per-component coefficient lists.");

  m.def(
      "certify_min_modulus",
      [](const Coeffs& f, int radial, int angular) {
        return certify_min_modulus(AnalyticVectorFunction(f), *make_grid(radial, angular));
      },
      py::arg("f"), py::arg("radial") = 64, py::arg("angular") = 128);

  m.def(
      "carleson",
      [](const Coeffs& F, int radial, int angular) {
        auto r = carleson_report(AnalyticVectorFunction(F), make_grid(radial, angular), CarlesonOptions{});
        py::dict d;
        d["F_sup"] = r.F_sup;
        d["box_norm"] = r.box_norm;
        d["embedding_const"] = r.embedding_const;
        d["bound"] = r.embedding_bound;
        d["within_bound"] = r.within_bound;
        return d;
      },
      py::arg("F"), py::arg("radial") = 64, py::arg("angular") = 128);

  m.def(
      "verify",
      [](int radial, int angular, int order) {
        RunConfig c;
        c.radial = radial;
        c.angular = angular;
        c.order = order;
        auto rep = run_verify(c);
        py::dict checks;
        for (const auto& k : rep.checks) checks[py::str(k.name)] = k.passed;
        return py::make_tuple(rep.all_passed, checks);
      },
      py::arg("radial") = 64, py::arg("angular") = 128, py::arg("order") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a command-line invocation; returns (exit code, stdout, stderr).");
}
