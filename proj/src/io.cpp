#include "coronakit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "coronakit/errors.hpp"
#include "json.hpp"

namespace coronakit {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Invalid, std::string("malformed JSON: ") + e.what());
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(ErrorKind::Invalid, std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorKind::Invalid, std::string(what) + " must be finite");
  return v;
}

Interval interval(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::Invalid, std::string(what) + " must be [lo, hi]");
  Interval i{number(j[0], what), number(j[1], what)};
  if (!(i.hi > i.lo)) fail(ErrorKind::Invalid, std::string(what) + " must have lo < hi");
  return i;
}

PolarBox box(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("theta") || !j.contains("r"))
    fail(ErrorKind::Invalid, std::string(what) + " needs theta and r intervals");
  return {interval(j["theta"], what), interval(j["r"], what)};
}

json pair(cplx c) { return json::array({c.real(), c.imag()}); }

json coefficients(const AnalyticVectorFunction& f) {
  json out = json::array();
  for (int k = 0; k < f.components(); ++k) {
    json comp = json::array();
    for (cplx c : f.component(k)) comp.push_back(pair(c));
    out.push_back(comp);
  }
  return out;
}

json config_object(const RunConfig& c) {
  return {{"degree", c.degree},         {"boundary_samples", c.boundary_samples},
          {"radial", c.radial},         {"angular", c.angular},
          {"order", c.order},           {"tol_bezout", c.tol_bezout},
          {"tol_dbar", c.tol_dbar},     {"tol_norm", c.tol_norm},
          {"seed", c.seed},             {"output_path", c.output_path}};
}

json norm_object(const NormReport& n) {
  return {{"per_derivative_sup", n.per_derivative_sup},
          {"weighted_sum", n.weighted_sum},
          {"dl_norm", n.dl_norm}};
}

}  // namespace

AnalyticVectorFunction parse_function_spec(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("m") || !j.contains("N") || !j.contains("coeffs"))
    fail(ErrorKind::Invalid, "function spec needs m, N and coeffs");
  if (!j["m"].is_number_integer() || !j["N"].is_number_integer())
    fail(ErrorKind::Invalid, "m and N must be integers");
  const int m = j["m"].get<int>();
  const int N = j["N"].get<int>();
  if (m < 1 || N < 0) fail(ErrorKind::Invalid, "need m >= 1 and N >= 0");
  const json& c = j["coeffs"];
  if (!c.is_array() || static_cast<int>(c.size()) != m)
    fail(ErrorKind::Invalid, "coeffs must list m components");
  std::vector<std::vector<cplx>> coeffs;
  for (const auto& comp : c) {
    if (!comp.is_array() || static_cast<int>(comp.size()) != N + 1)
      fail(ErrorKind::Invalid, "each component must list N+1 coefficients");
    std::vector<cplx> row;
    for (const auto& a : comp) {
      if (!a.is_array() || a.size() != 2) fail(ErrorKind::Invalid, "coefficients are [re, im] pairs");
      row.emplace_back(number(a[0], "coefficient"), number(a[1], "coefficient"));
    }
    coeffs.push_back(std::move(row));
  }
  return AnalyticVectorFunction(std::move(coeffs));
}

std::string write_function_spec(const AnalyticVectorFunction& f) {
  json j{{"m", f.components()}, {"N", f.degree()}, {"coeffs", coefficients(f)}};
  return j.dump(2) + "\n";
}

ArcSpecFile parse_arc_spec(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("S") || !j.contains("arcs") || !j.contains("eps"))
    fail(ErrorKind::Invalid, "arc spec needs S, arcs and eps");
  ArcSpecFile out;
  if (!j["S"].is_array() || j["S"].empty()) fail(ErrorKind::Invalid, "S must be a non-empty list");
  for (const auto& s : j["S"]) out.set.S.push_back(interval(s, "S interval"));
  out.eps = number(j["eps"], "eps");
  if (!(out.eps > 0.0)) fail(ErrorKind::Invalid, "eps must be positive");
  if (j.contains("r")) out.r = number(j["r"], "r");
  if (!(out.r > 0.0 && out.r < 1.0)) fail(ErrorKind::Invalid, "r must lie in (0, 1)");
  if (!j["arcs"].is_array() || j["arcs"].empty()) fail(ErrorKind::Invalid, "arcs must be a non-empty list");
  for (const auto& a : j["arcs"]) {
    if (!a.is_object() || !a.contains("C")) fail(ErrorKind::Invalid, "each arc needs C");
    const Interval C = interval(a["C"], "C");
    ArcSpec arc;
    if (a.contains("U") || a.contains("W")) {
      if (!a.contains("U") || !a.contains("W")) fail(ErrorKind::Invalid, "give both U and W or neither");
      arc = {C, box(a["U"], "U"), box(a["W"], "W")};
    } else {
      const Interval* host = nullptr;
      for (const auto& s : out.set.S)
        if (C.lo > s.lo && C.hi < s.hi) host = &s;
      if (host == nullptr) fail(ErrorKind::Invalid, "arc C is not inside an S interval");
      arc = default_arc(*host, C);
    }
    out.set.arcs.push_back(arc);
  }
  validate(out.set);
  return out;
}

std::string config_json(const RunConfig& config) { return config_object(config).dump(2) + "\n"; }

std::string solution_report(const CoronaSolution& s, const RunConfig& config,
                            const std::string& status) {
  json log = json::array();
  for (auto [r, a] : s.refinement_log) log.push_back({{"r", r}, {"alpha_norm", a}});
  json j{{"config", config_object(config)},
         {"status", status},
         {"g", {{"m", s.g.components()}, {"N", s.g.degree()}, {"coeffs", coefficients(s.g)}}},
         {"bezout_residual", s.bezout_residual},
         {"projected_residual", s.projected_residual},
         {"antianalytic_residual", s.antianalytic_residual},
         {"negative_mode_fraction", s.negative_mode_fraction},
         {"dbar_residual", s.dbar_residual},
         {"phi_identity", s.phi_identity},
         {"xi_identity", s.xi_identity},
         {"node_bezout_identity", s.node_bezout_identity},
         {"low_confidence", s.low_confidence},
         {"g_norm", norm_object(s.g_norm)},
         {"refinement_log", log}};
  return j.dump(2) + "\n";
}

std::string carleson_json(const CarlesonReport& r, const RunConfig& config) {
  json j{{"config", config_object(config)},
         {"F_sup", r.F_sup},
         {"total_mass", r.total_mass},
         {"box_norm", r.box_norm},
         {"embedding_const", r.embedding_const},
         {"normalized_embedding", r.normalized_embedding},
         {"bound", r.embedding_bound},
         {"uchiyama_bound", r.uchiyama_bound},
         {"within_bound", r.within_bound}};
  return j.dump(2) + "\n";
}

std::string extension_report(const ExtensionResult& r, const RunConfig& config) {
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"index", s.index},         {"r", s.r},
                     {"budget", s.budget},       {"eps_S1", s.eps_S1},
                     {"dbar_disc", s.dbar_disc}, {"dbar_collar", s.dbar_collar},
                     {"attempts", s.attempts},   {"met", s.met}});
  json collar = json::array();
  for (size_t i = 0; i < r.domain.collar.size(); ++i) {
    json vals = json::array();
    for (cplx v : r.collar_values[i]) vals.push_back(pair(v));
    collar.push_back({{"z", pair(r.domain.collar[i])}, {"F", vals}});
  }
  json j{{"config", config_object(config)},
         {"budget", r.budget},
         {"budget_met", r.budget_met},
         {"failed_step", r.failed_step},
         {"eps_S1", r.eps_S1},
         {"eps_S3", r.eps_S3},
         {"dbar_residual_disc", r.dbar_residual_disc},
         {"dbar_residual_collar", r.dbar_residual_collar},
         {"negative_mode_fraction", r.negative_mode_fraction},
         {"f_norm", r.f_norm},
         {"F_norm", r.F_norm},
         {"rho_divided_differences", r.domain.max_divided_difference},
         {"F_disc", {{"m", r.F_disc.components()}, {"N", r.F_disc.degree()},
                     {"coeffs", coefficients(r.F_disc)}}},
         {"collar", collar},
         {"steps", steps}};
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Invalid, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Invalid, "cannot write " + path);
  out << text;
}

}  // namespace coronakit
