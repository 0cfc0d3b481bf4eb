#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "curvlab/geometry.hpp"
#include "curvlab/scenario.hpp"
#include "curvlab/toml.hpp"

using namespace curvlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "curvlab_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("toml subset: tables, scalars, arrays, comments") {
  nlohmann::json j = parse_toml(
      "# comment\n"
      "[metric]\n"
      "builtin = \"cone\"  # trailing comment\n"
      "beta = 0.3\n"
      "flag = true\n"
      "\n"
      "[experiment]\n"
      "radii = [0.1, 0.2, 0.3]\n"
      "pairs = [[0, 0, 1, 1], [1, 0, 0, 1]]\n"
      "count = 12\n");
  CHECK(j.at("metric").at("builtin") == "cone");
  CHECK(j.at("metric").at("beta").get<double>() == doctest::Approx(0.3));
  CHECK(j.at("metric").at("flag") == true);
  CHECK(j.at("experiment").at("radii").size() == 3);
  CHECK(j.at("experiment").at("pairs").at(1).at(2).get<double>() == 0.0);
  CHECK(j.at("experiment").at("count").get<long long>() == 12);

  CHECK_THROWS_AS(parse_toml("[bad\n"), Error);
  CHECK_THROWS_AS(parse_toml("key value\n"), Error);
  CHECK_THROWS_AS(parse_toml("key = [1, 2\n"), Error);
}

TEST_CASE("scenario: unknown metric or experiment is a config error") {
  nlohmann::json cfg{{"metric", {{"builtin", "no-such"}}},
                     {"experiment", {{"kind", "area"}}}};
  auto dir = temp_dir("bad");
  try {
    run_scenario_config(cfg, dir.string());
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }

  nlohmann::json cfg2{{"metric", {{"builtin", "cone"}}},
                      {"experiment", {{"kind", "no-such"}}}};
  try {
    run_scenario_config(cfg2, dir.string());
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("experiment.kind") != std::string::npos);
  }
}

TEST_CASE("scenario: gauss-bonnet runs are deterministic byte for byte") {
  nlohmann::json cfg{{"metric", {{"builtin", "cone"}, {"beta", 0.3}}},
                     {"grid", {{"cells", 96}}},
                     {"experiment", {{"kind", "gauss-bonnet"}, {"annuli", 6}, {"seed", 7}}}};
  auto dir1 = temp_dir("det1");
  auto dir2 = temp_dir("det2");
  ScenarioOutcome o1 = run_scenario_config(cfg, dir1.string());
  ScenarioOutcome o2 = run_scenario_config(cfg, dir2.string());
  CHECK(o1.all_pass);
  CHECK(o2.all_pass);
  CHECK(slurp((dir1 / "gauss-bonnet.csv").string()) ==
        slurp((dir2 / "gauss-bonnet.csv").string()));
}

TEST_CASE("scenario: area experiment on a small grid") {
  nlohmann::json cfg{
      {"metric", {{"builtin", "cone"}, {"beta", 0.3}}},
      {"grid", {{"cells", 256}}},
      {"experiment",
       {{"kind", "area"}, {"radii", {0.25}}, {"expected_ratio", 1.3}, {"tol", 0.03}}}};
  auto dir = temp_dir("area");
  ScenarioOutcome out = run_scenario_config(cfg, dir.string());
  CHECK(out.all_pass);
  CHECK(std::filesystem::exists(dir / "area.csv"));
  CHECK(std::filesystem::exists(dir / "area.json"));
  // CSV carries no absolute paths
  CHECK(slurp((dir / "area.csv").string()).find(dir.string()) == std::string::npos);
}

TEST_CASE("scenario: distance-field exports CSV plus sidecar") {
  nlohmann::json cfg{{"metric", {{"builtin", "cone"}, {"beta", 0.3}}},
                     {"grid", {{"cells", 64}}},
                     {"experiment", {{"kind", "distance-field"}, {"source", {0.0, 0.0}}}}};
  auto dir = temp_dir("field");
  ScenarioOutcome out = run_scenario_config(cfg, dir.string());
  CHECK(out.all_pass);
  std::string csv = slurp((dir / "distance_field.csv").string());
  CHECK(csv.rfind("x,y,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65 * 65 + 1);
  nlohmann::json sidecar = nlohmann::json::parse(slurp((dir / "distance_field.json").string()));
  CHECK(sidecar.at("stencil").get<int>() == 16);
  CHECK(sidecar.at("h").get<double>() == doctest::Approx(2.0 / 64.0));
}

TEST_CASE("scenario: grid and stencil overrides apply") {
  nlohmann::json cfg{{"metric", {{"builtin", "cone"}, {"beta", 0.3}}},
                     {"grid", {{"cells", 64}, {"stencil", 16}}},
                     {"experiment", {{"kind", "distance-field"}, {"source", {0.0, 0.0}}}}};
  auto dir = temp_dir("override");
  ScenarioOverrides ov;
  ov.grid = 48;
  ov.stencil = 8;
  run_scenario_config(cfg, dir.string(), ov);
  nlohmann::json sidecar = nlohmann::json::parse(slurp((dir / "distance_field.json").string()));
  CHECK(sidecar.at("stencil").get<int>() == 8);
  CHECK(sidecar.at("nx").get<int>() == 49);
}
