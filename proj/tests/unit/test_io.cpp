#include <doctest.h>

#include <cmath>

#include "coronakit/config.hpp"
#include "coronakit/errors.hpp"
#include "coronakit/io.hpp"
#include "json.hpp"

using namespace coronakit;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Invalid;
}

}  // namespace

TEST_CASE("run configuration validation enforces the documented ranges") {
  RunConfig c;
  CHECK_NOTHROW(validate(c, 10));
  auto bad = [&](auto mutate, int data_degree = 1) {
    RunConfig d;
    mutate(d);
    CHECK(kind_of([&] { validate(d, data_degree); }) == ErrorKind::Invalid);
  };
  bad([](RunConfig& d) { d.boundary_samples = 1000; });
  bad([](RunConfig& d) { d.boundary_samples = 16; d.degree = 8; });
  bad([](RunConfig& d) { d.boundary_samples = 16; }, 8);
  // The automatic truncation degree 2N + 16 needs G >= 2(2N + 17).
  bad([](RunConfig& d) { d.boundary_samples = 64; }, 8);
  bad([](RunConfig& d) { d.radial = 3; });
  bad([](RunConfig& d) { d.angular = 127; });
  bad([](RunConfig& d) { d.order = -1; });
  bad([](RunConfig& d) { d.tol_dbar = 0.0; });
  bad([](RunConfig& d) { d.degree = -2; });
  RunConfig edge;
  edge.boundary_samples = 16;
  edge.degree = 7;
  CHECK_NOTHROW(validate(edge, 7));
}

TEST_CASE("function specs round-trip exactly and reject malformed input") {
  AnalyticVectorFunction f({{cplx(0.1, -0.2), 1.0 / 3.0, cplx(0, 1e-300)}, {0.5, 0.0, std::nextafter(1.0, 2.0)}});
  auto g = parse_function_spec(write_function_spec(f));
  REQUIRE(g.components() == 2);
  REQUIRE(g.degree() == 2);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j <= 2; ++j) CHECK(g.coeff(k, j) == f.coeff(k, j));
  for (const char* text : {
           "",
           "{",
           "[]",
           R"({"m":1,"N":0})",
           R"({"m":0,"N":0,"coeffs":[]})",
           R"({"m":1,"N":-1,"coeffs":[[]]})",
           R"({"m":1.5,"N":0,"coeffs":[[[1,0]]]})",
           R"({"m":2,"N":0,"coeffs":[[[1,0]]]})",
           R"({"m":1,"N":1,"coeffs":[[[1,0]]]})",
           R"({"m":1,"N":0,"coeffs":[[[1]]]})",
           R"({"m":1,"N":0,"coeffs":[[["a",0]]]})",
       })
    CHECK(kind_of([&] { parse_function_spec(text); }) == ErrorKind::Invalid);
}

TEST_CASE("arc specs fill default neighbourhoods and enforce the arc invariants") {
  auto a = parse_arc_spec(R"({"S": [[-1.5, 1.5]], "eps": 0.05, "arcs": [{"C": [-0.3, 0.3]}]})");
  CHECK(a.eps == 0.05);
  CHECK(a.r == 0.9);
  REQUIRE(a.set.arcs.size() == 1);
  const auto d = default_arc({-1.5, 1.5}, {-0.3, 0.3});
  CHECK(a.set.arcs[0].U.theta.lo == d.U.theta.lo);
  CHECK(a.set.arcs[0].W.r.hi == d.W.r.hi);
  auto explicit_boxes = parse_arc_spec(
      R"({"S": [[-1.5, 1.5]], "eps": 0.1, "r": 0.95, "arcs": [{"C": [-0.3, 0.3],
          "U": {"theta": [-0.5, 0.5], "r": [0.9, 1.1]}, "W": {"theta": [-0.8, 0.8], "r": [0.8, 1.2]}}]})");
  CHECK(explicit_boxes.set.arcs[0].W.theta.hi == 0.8);
  CHECK(explicit_boxes.r == 0.95);
  for (const char* text : {
           R"({"S": [[-1.5, 1.5]], "eps": 0, "arcs": [{"C": [-0.3, 0.3]}]})",
           R"({"S": [[-1.5, 1.5]], "eps": 0.1, "r": 1, "arcs": [{"C": [-0.3, 0.3]}]})",
           R"({"S": [[-1.5, 1.5]], "eps": 0.1, "arcs": [{"C": [-0.3, 0.3]}, {"C": [0.1, 0.5]}]})",
           R"({"S": [[-1.5, 1.5]], "eps": 0.1, "arcs": [{"C": [1.0, 2.0]}]})",
           R"({"S": [[-1.5, 1.5]], "eps": 0.1, "arcs": []})",
           R"({"S": [[1.5, -1.5]], "eps": 0.1, "arcs": [{"C": [-0.3, 0.3]}]})",
           R"({"S": [[-1.5, 1.5]], "eps": 0.1, "arcs": [{"C": [-0.3, 0.3],
               "U": {"theta": [-0.2, 0.2], "r": [0.9, 1.1]}, "W": {"theta": [-0.8, 0.8], "r": [0.8, 1.2]}}]})",
       })
    CHECK(kind_of([&] { parse_arc_spec(text); }) == ErrorKind::Invalid);
}

TEST_CASE("every report embeds the full run configuration") {
  RunConfig c;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.output_path = "x.json";
  c.order = 2;
  auto check_config = [&](const std::string& text) {
    auto j = nlohmann::json::parse(text).at("config");
    CHECK(j.at("seed").get<std::uint64_t>() == c.seed);
    CHECK(j.at("order").get<int>() == 2);
    CHECK(j.at("boundary_samples").get<int>() == 4096);
    CHECK(j.at("output_path").get<std::string>() == "x.json");
    for (const char* key : {"degree", "radial", "angular", "tol_bezout", "tol_dbar", "tol_norm"})
      CHECK(j.contains(key));
  };
  check_config(R"({"config":)" + config_json(c) + "}");
  CoronaSolution s;
  check_config(solution_report(s, c, "OK"));
  check_config(carleson_json(CarlesonReport{}, c));
  check_config(extension_report(ExtensionResult{}, c));
}
