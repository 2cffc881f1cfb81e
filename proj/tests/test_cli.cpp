#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "normhol/cli.hpp"

using nlohmann::json;
using namespace normhol::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "normhol");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
  return std::string(NORMHOL_FIXTURES) + "/" + name;
}

std::string scratch(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("normhol_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("fixture reports") {
  auto r = run_cli({"classify-bbi", "--input", fixture("type2_so3.json")});
  REQUIRE(r.code == kExitOk);
  auto j = json::parse(r.out);
  CHECK(j["type"] == "Type2");
  CHECK(j["m"] == 3);
  CHECK(j["mode"] == "exact");

  r = run_cli({"curvature-space", "--algebra", fixture("so2.json")});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["dim_K"] == 1);
  CHECK(j["dim_B"] == 2);

  r = run_cli({"pipeline", "--input", fixture("flat_plane.json")});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["holonomy"]["trivial"] == true);
  CHECK(j["holonomy"]["dim"] == 0);
}

TEST_CASE("algebraic subcommands") {
  auto r = run_cli({"curvature", "--input", fixture("sphere_family.json")});
  REQUIRE(r.code == kExitOk);
  auto j = json::parse(r.out);
  CHECK(j["identities"]["all"] == true);
  CHECK(j["trace_formula"] == true);

  r = run_cli({"screen", "--input", fixture("sphere_family.json")});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["expansion_matches"] == true);
  CHECK(j["screen_algebra_dim"] == 1);

  r = run_cli({"decompose", "--input", fixture("diagonal_so2.json")});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["flags"]["borel_lichnerowicz"] == false);
  CHECK(j["bl"]["witness"].is_object());

  r = run_cli({"weak-berger", "--input", fixture("so2.json"), "--mode", "float"});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["weak_berger"] == true);
  CHECK(j["mode"] == "float");
}

TEST_CASE("geometry and light cone") {
  auto r = run_cli({"geometry", "--input", fixture("sphere_geometry.json")});
  REQUIRE(r.code == kExitOk);
  auto j = json::parse(r.out);
  CHECK(j["parallel_pi"]["parallel"] == true);
  CHECK(j["mean_curvature"][0]["class"] == "spacelike");

  r = run_cli({"geometry", "--input", fixture("sphere_geometry.json"), "--mode", "exact"});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("--mode float") != std::string::npos);

  r = run_cli({"pipeline", "--input", fixture("light_cone.json")});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["light_cone"]["all_on_cone"] == true);
  CHECK(j["light_cone_normal"]["xi_contains_v"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"frobnicate"}).code == kExitUsage);
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"curvature", "--bogus"}).code == kExitUsage);
  CHECK(run_cli({"--help"}).code == kExitOk);
  CHECK(run_cli({"curvature", "--input", "/nonexistent/x.json"}).code == kExitInput);
  CHECK(run_cli({"curvature", "--input", scratch("bad.json", "{not json")}).code == kExitInput);
  CHECK(run_cli({"curvature", "--input", fixture("sphere_family.json"), "--tol", "0"}).code ==
        kExitInput);
  CHECK(run_cli({"curvature", "--input", fixture("sphere_family.json"), "--mode", "fuzzy"}).code ==
        kExitUsage);

  const auto fractional = scratch(
      "frac.json", R"({"signature": {"p": 0, "q": 1}, "tangent_dim": 1,
                     "shape_operators": {"e1": [[0.5]]}})");
  auto r = run_cli({"curvature", "--input", fractional});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("rational string") != std::string::npos);
  CHECK(run_cli({"curvature", "--input", fractional, "--mode", "float"}).code == kExitOk);

  const auto not_skew = scratch("skew.json", R"({"dim": 2, "generators": [[[1, 0], [0, 0]]]})");
  CHECK(run_cli({"decompose", "--input", not_skew}).code == kExitInput);
}

TEST_CASE("reports are deterministic and newline terminated") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"pipeline", "--input", fixture("light_cone.json")},
           {"decompose", "--input", fixture("diagonal_so2.json"), "--seed", "7"},
           {"classify-bbi", "--input", fixture("type2_so3.json"), "--report", "text"}}) {
    const auto a = run_cli(args), b = run_cli(args);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.back() == '\n');
  }
}
