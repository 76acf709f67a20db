#include "coronakit/cli.hpp"

#include <algorithm>
#include <sstream>

#include "CLI11.hpp"
#include "coronakit/errors.hpp"
#include "coronakit/experiments.hpp"
#include "coronakit/io.hpp"

namespace coronakit {

namespace {

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output_path.empty()) out << text;
  else write_text_file(config.output_path, text);
}

int usage_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Certification:
    case ErrorKind::Refinement:
      return kExitCertification;
    case ErrorKind::Budget:
      return kExitBudget;
    default:
      return kExitUsage;
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::Invalid, "malformed number in list: '" + item + "'");
    }
  }
  if (v.empty()) fail(ErrorKind::Invalid, "empty list");
  return v;
}

int cmd_solve(const RunConfig& config, const std::string& spec_path, std::ostream& out,
              std::ostream& err) {
  auto f = parse_function_spec(read_text_file(spec_path));
  validate(config, f.degree());
  SolveOptions so;
  so.radial = config.radial;
  so.angular = config.angular;
  so.boundary_samples = config.boundary_samples;
  so.degree = config.degree;
  so.order = config.order;
  auto s = solve_corona(f, so);
  int code = kExitSuccess;
  std::string status = "OK";
  if (!(s.bezout_residual <= config.tol_bezout) || !(s.dbar_residual <= config.tol_dbar)) {
    code = kExitCertification;
    status = "RESIDUAL_ABOVE_TOLERANCE";
    err << "solve: residuals above tolerance (bezout " << s.bezout_residual << ", dbar "
        << s.dbar_residual << ")\n";
  } else if (s.low_confidence) {
    code = kExitLowConfidence;
    status = "LOW_CONFIDENCE";
    err << "solve: low confidence, negative-mode fraction " << s.negative_mode_fraction << "\n";
  }
  emit(config, solution_report(s, config, status), out);
  return code;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto rep = run_verify(config);
  emit(config, verify_json(rep, config), out);
  for (const auto& c : rep.checks)
    if (!c.passed) err << "verify: " << c.name << " failed (" << c.measured << " > " << c.tolerance << ")\n";
  return rep.all_passed ? kExitSuccess : kExitCertification;
}

int cmd_estimate(const RunConfig& config, const EstimateOptions& options, std::ostream& out,
                 std::ostream& err) {
  auto records = estimate_constant(config, options);
  emit(config, records_csv(records), out);
  if (!non_increasing_in_delta(summarize(records)))
    err << "estimate-constant: max g norm is not non-increasing in delta\n";
  return kExitSuccess;
}

int cmd_extend(const RunConfig& config, const std::string& arc_path, const std::string& spec_path,
               std::ostream& out, std::ostream& err) {
  auto arcs = parse_arc_spec(read_text_file(arc_path));
  auto f = parse_function_spec(read_text_file(spec_path));
  ExtensionOptions eo;
  eo.order = config.order;
  eo.dbar_tolerance = config.tol_dbar;
  auto r = multi_arc_extension(f, arcs.set, arcs.eps, arcs.r, eo);
  emit(config, extension_report(r, config), out);
  if (!r.budget_met) {
    err << "extend: budget not met";
    if (r.failed_step >= 0) err << " at step " << r.failed_step;
    err << "\n";
    return kExitBudget;
  }
  return kExitSuccess;
}

int cmd_carleson(const RunConfig& config, const std::string& spec_path, std::ostream& out,
                 std::ostream& err) {
  auto F = parse_function_spec(read_text_file(spec_path));
  validate(config, F.degree());
  CarlesonOptions co;
  co.boundary_samples = config.boundary_samples;
  co.tolerance = config.tol_norm;
  auto rep = carleson_report(F, make_grid(config.radial, config.angular), co);
  emit(config, carleson_json(rep, config), out);
  if (!rep.within_bound) {
    err << "carleson: embedding constant " << rep.embedding_const << " exceeds bound "
        << rep.embedding_bound << "\n";
    return kExitCertification;
  }
  return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corona problem toolkit", "coronakit"};
  app.require_subcommand(1);
  RunConfig config;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--degree", config.degree, "truncation degree N of g (-1: automatic)");
    sub->add_option("--grid-boundary", config.boundary_samples, "boundary samples G");
    sub->add_option("--grid-radial", config.radial, "radial nodes R");
    sub->add_option("--grid-angular", config.angular, "angular nodes Q");
    sub->add_option("--order", config.order, "smoothness order n");
    sub->add_option("--tol-bezout", config.tol_bezout, "Bezout residual tolerance");
    sub->add_option("--tol-dbar", config.tol_dbar, "d-bar residual tolerance");
    sub->add_option("--tol-norm", config.tol_norm, "norm tolerance");
    sub->add_option("--seed", config.seed, "seed of the random families");
    sub->add_option("--out", config.output_path, "output file (default: standard output)");
  };

  std::string spec_path;
  std::string arc_path;
  auto* solve = app.add_subcommand("solve", "solve the corona problem for a function spec");
  add_common(solve);
  solve->add_option("spec", spec_path, "function-spec file")->required();

  auto* verify = app.add_subcommand("verify", "run the identity suite");
  add_common(verify);

  EstimateOptions est;
  std::string deltas = "0.3,0.5,0.7";
  std::string orders;
  auto* estimate = app.add_subcommand("estimate-constant", "sample the corona constant on random data");
  add_common(estimate);
  estimate->add_option("--m", est.m, "number of components");
  estimate->add_option("--deltas", deltas, "comma-separated delta grid");
  estimate->add_option("--orders", orders, "comma-separated orders n (default: --order)");
  estimate->add_option("--trials", est.trials, "trials per (delta, n)");
  estimate->add_option("--data-degree", est.data_degree, "degree of the random polynomials");
  estimate->add_flag("--timing", est.timing, "record wall time (breaks byte-identical reruns)");

  auto* extend = app.add_subcommand("extend", "approximate extension across boundary arcs");
  add_common(extend);
  extend->add_option("arcs", arc_path, "arc-spec file")->required();
  extend->add_option("spec", spec_path, "function-spec file")->required();

  auto* carleson = app.add_subcommand("carleson", "Carleson report of the log-weight measure");
  add_common(carleson);
  carleson->add_option("spec", spec_path, "function-spec file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(config, spec_path, out, err);
    if (*estimate) {
      validate(config);
      est.deltas = parse_list(deltas);
      if (orders.empty()) {
        est.orders = {config.order};
      } else {
        est.orders.clear();
        for (double n : parse_list(orders)) {
          if (n != static_cast<int>(n)) fail(ErrorKind::Invalid, "orders must be integers");
          est.orders.push_back(static_cast<int>(n));
        }
      }
      return cmd_estimate(config, est, out, err);
    }
    if (*extend) {
      validate(config);
      return cmd_extend(config, arc_path, spec_path, out, err);
    }
    if (*carleson) return cmd_carleson(config, spec_path, out, err);
    return cmd_verify(config, out, err);
  } catch (const Error& e) {
    err << app.get_subcommands().front()->get_name() << ": " << to_string(e.kind()) << ": " << e.what()
        << "\n";
    return usage_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace coronakit
