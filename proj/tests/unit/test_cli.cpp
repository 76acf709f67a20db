#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "coronakit/cli.hpp"
#include "coronakit/io.hpp"
#include "json.hpp"

using namespace coronakit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "coronakit_cli_test";
  fs::create_directories(dir);
  const auto path = (dir / name).string();
  write_text_file(path, text);
  return path;
}

const char* kPair = R"({"m":2,"N":1,"coeffs":[[[0,0],[1,0]],[[0.5,0],[0,0]]]})";
const char* kZ = R"({"m":1,"N":1,"coeffs":[[[0,0],[1,0]]]})";

}  // namespace

TEST_CASE("solve: f = (z, 1/2) succeeds against the reference solution (0, 2)") {
  const auto spec = temp_file("pair.json", kPair);
  const auto out = (fs::temp_directory_path() / "coronakit_cli_test" / "pair_solution.json").string();
  auto r = cli({"solve", spec, "--out", out});
  CHECK(r.code == kExitSuccess);
  auto j = nlohmann::json::parse(read_text_file(out));
  CHECK(j.at("bezout_residual").get<double>() < 1e-4);
  CHECK(j.at("status") == "OK");
  auto g = j.at("g").at("coeffs");
  double dist = 0.0;
  for (size_t k = 0; k < g.size(); ++k)
    for (size_t i = 0; i < g[k].size(); ++i) {
      const cplx c(g[k][i][0].get<double>(), g[k][i][1].get<double>());
      const cplx want = (k == 1 && i == 0) ? 2.0 : 0.0;
      dist = std::max(dist, std::abs(c - want));
    }
  CHECK(dist < 1e-4);
}

TEST_CASE("solve: exit codes for failing certification and usage errors") {
  CHECK(cli({"solve", temp_file("z.json", kZ)}).code == kExitCertification);
  const auto pair = temp_file("pair.json", kPair);
  CHECK(cli({"solve", pair, "--grid-boundary", "2"}).code == kExitUsage);
  CHECK(cli({"solve", pair, "--degree", "4095", "--grid-boundary", "4096"}).code == kExitUsage);
  CHECK(cli({"solve", pair, "--grid-boundary", "1000"}).code == kExitUsage);
  CHECK(cli({"solve", temp_file("bad.json", "{\"m\": 1}")}).code == kExitUsage);
  CHECK(cli({"solve", "/nonexistent/spec.json"}).code == kExitUsage);
  CHECK(cli({"solve"}).code == kExitUsage);
  CHECK(cli({"solve", pair, "--grid-radial", "x"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitSuccess);
}

TEST_CASE("verify: default passes, coarse grid fails, n = 0 chain is vacuous") {
  auto ok = cli({"verify"});
  CHECK(ok.code == kExitSuccess);
  auto j = nlohmann::json::parse(ok.out);
  CHECK(j.at("all_passed").get<bool>());
  CHECK(j.contains("config"));
  CHECK(cli({"verify", "--grid-radial", "4"}).code != kExitSuccess);
}

TEST_CASE("estimate-constant: CSV output is deterministic under a fixed seed") {
  const std::vector<std::string> args = {"estimate-constant", "--trials", "1", "--seed", "42",
                                         "--deltas", "0.3,0.7", "--orders", "0,1"};
  auto a = cli(args);
  auto b = cli(args);
  CHECK(a.code == kExitSuccess);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("delta,m,n,trial,g_norm,bezout_residual,dbar_residual,wall_ms\n", 0) == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 5);
  CHECK(cli({"estimate-constant", "--trials", "0"}).code == kExitUsage);
  CHECK(cli({"estimate-constant", "--deltas", "0.3,x"}).code == kExitUsage);
}

TEST_CASE("extend: polynomial data succeed; invalid budgets and overlapping arcs are usage errors") {
  const auto f = temp_file("poly.json", R"({"m":2,"N":2,"coeffs":[[[0,0],[1,0],[0,0]],[[0.5,0],[0,0],[0.2,0]]]})");
  const auto arcs = temp_file("arcs.json", R"({"S": [[-1.5, 1.5]], "eps": 0.05, "r": 0.95, "arcs": [{"C": [-0.3, 0.3]}]})");
  auto r = cli({"extend", arcs, f});
  CHECK(r.code == kExitSuccess);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("budget_met").get<bool>());
  CHECK(j.at("eps_S1").get<double>() < 0.05);
  const auto zero = temp_file("zero.json", R"({"S": [[-1.5, 1.5]], "eps": 0, "arcs": [{"C": [-0.3, 0.3]}]})");
  CHECK(cli({"extend", zero, f}).code == kExitUsage);
  const auto overlap = temp_file(
      "overlap.json", R"({"S": [[-1.5, 1.5]], "eps": 0.05, "arcs": [{"C": [-0.3, 0.3]}, {"C": [0.1, 0.5]}]})");
  CHECK(cli({"extend", overlap, f}).code == kExitUsage);
  const auto tiny = temp_file("tiny.json", R"({"S": [[-1.5, 1.5]], "eps": 1e-9, "r": 0.9, "arcs": [{"C": [-0.3, 0.3]}]})");
  auto budget = cli({"extend", tiny, f});
  CHECK(budget.code == kExitBudget);
  CHECK(budget.err.find("step 1") != std::string::npos);
}

TEST_CASE("carleson: z, z^2 and constants stay within 4 ||F||^2") {
  for (const char* spec : {R"({"m":1,"N":1,"coeffs":[[[0,0],[1,0]]]})",
                           R"({"m":1,"N":2,"coeffs":[[[0,0],[0,0],[1,0]]]})",
                           R"({"m":1,"N":0,"coeffs":[[[0.5,0]]]})"}) {
    auto r = cli({"carleson", temp_file("F.json", spec)});
    CHECK(r.code == kExitSuccess);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("embedding_const").get<double>() <= j.at("bound").get<double>() + 1e-3);
    CHECK(j.at("within_bound").get<bool>());
  }
  auto c = nlohmann::json::parse(cli({"carleson", temp_file("c.json", R"({"m":1,"N":0,"coeffs":[[[0.5,0]]]})")}).out);
  CHECK(c.at("total_mass").get<double>() == 0.0);
  CHECK(cli({"carleson", temp_file("bad.json", "not json")}).code == kExitUsage);
}
