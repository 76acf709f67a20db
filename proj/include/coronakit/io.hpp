#pragma once

// Structured-text (JSON) formats: function specs, arc specs and reports.
// Every report embeds the RunConfig that produced it.

#include <string>

#include "coronakit/carleson.hpp"
#include "coronakit/config.hpp"
#include "coronakit/corona.hpp"
#include "coronakit/extension.hpp"

namespace coronakit {

/// {"m": int, "N": int, "coeffs": [[[re, im], ...] per component]}. Throws Invalid.
AnalyticVectorFunction parse_function_spec(const std::string& text);
std::string write_function_spec(const AnalyticVectorFunction& f);

struct ArcSpecFile {
  ArcSet set;
  double eps = 0.0;
  double r = 0.9;
};

/// {"S": [[lo, hi], ...], "eps": e, "r": r, "arcs": [{"C": [lo, hi],
/// "U": {"theta": [..], "r": [..]}, "W": {...}}, ...]}. U and W are optional
/// and default to default_arc around C. Throws Invalid; the arc invariants
/// are checked by validate(ArcSet).
ArcSpecFile parse_arc_spec(const std::string& text);

std::string config_json(const RunConfig& config);
std::string solution_report(const CoronaSolution& s, const RunConfig& config,
                            const std::string& status);
std::string carleson_json(const CarlesonReport& r, const RunConfig& config);
std::string extension_report(const ExtensionResult& r, const RunConfig& config);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace coronakit
