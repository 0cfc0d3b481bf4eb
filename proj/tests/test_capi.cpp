// Exercises the extern-C surface the CLI links against.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "curvlab/curvlab.h"

namespace {

struct MetricHandle {
  curvlab_metric* m = nullptr;
  ~MetricHandle() { curvlab_metric_free(m); }
};

}  // namespace

TEST_CASE("C API: builtin metric lifecycle and evaluation") {
  MetricHandle h;
  REQUIRE(curvlab_metric_create_builtin("cone", "{\"beta\":0.5}", &h.m) == CURVLAB_OK);
  double u = 0.0;
  REQUIRE(curvlab_metric_eval_u(h.m, std::exp(-1.0), 0.0, &u) == CURVLAB_OK);
  CHECK(u == doctest::Approx(-0.5).epsilon(1e-10));

  // error path: evaluation at the atom
  curvlab_status status = curvlab_metric_eval_u(h.m, 0.0, 0.0, &u);
  CHECK(status == CURVLAB_E_EVAL_AT_ATOM);
  CHECK(std::string(curvlab_last_error()).size() > 0);
  CHECK(std::string(curvlab_status_name(status)) == "eval-at-atom");

  char* json = nullptr;
  REQUIRE(curvlab_metric_to_json(h.m, &json) == CURVLAB_OK);
  curvlab_metric* back = nullptr;
  REQUIRE(curvlab_metric_from_json(json, &back) == CURVLAB_OK);
  double u2 = 0.0;
  REQUIRE(curvlab_metric_eval_u(back, std::exp(-1.0), 0.0, &u2) == CURVLAB_OK);
  CHECK(u2 == doctest::Approx(u).epsilon(1e-14));
  curvlab_metric_free(back);
  curvlab_string_free(json);

  CHECK(curvlab_metric_create_builtin("nope", nullptr, &h.m) == CURVLAB_E_CONFIG);
}

TEST_CASE("C API: circle mean, point-mass detection, curvature export") {
  MetricHandle h;
  REQUIRE(curvlab_metric_create_builtin("cone", "{\"beta\":0.3}", &h.m) == CURVLAB_OK);
  double mean = 0.0;
  REQUIRE(curvlab_metric_circle_mean(h.m, 0.0, 0.0, 0.25, &mean) == CURVLAB_OK);
  CHECK(mean == doctest::Approx(0.3 * std::log(0.25)).epsilon(1e-8));

  double mass = 0.0;
  REQUIRE(curvlab_metric_point_mass_detect(h.m, 0.0, 0.0, 1.0 / 256.0, &mass) == CURVLAB_OK);
  CHECK(mass == doctest::Approx(-2.0 * M_PI * 0.3).epsilon(0.01));

  char* mj = nullptr;
  REQUIRE(curvlab_metric_curvature(h.m, &mj) == CURVLAB_OK);
  curvlab_measure* mu = nullptr;
  REQUIRE(curvlab_measure_from_json(mj, &mu) == CURVLAB_OK);
  double tv = 0.0;
  REQUIRE(curvlab_measure_total_variation(mu, &tv) == CURVLAB_OK);
  CHECK(tv == doctest::Approx(0.6 * M_PI).epsilon(1e-12));
  curvlab_measure_free(mu);
  curvlab_string_free(mj);
}

TEST_CASE("C API: measures and the log potential") {
  const char* json = "{\"atoms\":[{\"x\":0,\"y\":0,\"mass\":-3.141592653589793}]}";
  curvlab_measure* mu = nullptr;
  REQUIRE(curvlab_measure_from_json(json, &mu) == CURVLAB_OK);
  double val = 0.0;
  REQUIRE(curvlab_measure_log_potential(mu, std::exp(1.0), 0.0, &val) == CURVLAB_OK);
  CHECK(val == doctest::Approx(0.5).epsilon(1e-12));
  char* round = nullptr;
  REQUIRE(curvlab_measure_to_json(mu, &round) == CURVLAB_OK);
  CHECK(std::string(round).find("atoms") != std::string::npos);
  curvlab_string_free(round);
  curvlab_measure_free(mu);
}

TEST_CASE("C API: distance and distance fields") {
  MetricHandle h;
  REQUIRE(curvlab_metric_create_builtin("cone", "{\"beta\":0.3}", &h.m) == CURVLAB_OK);
  curvlab_grid_options opt{128, 16};
  double d = 0.0;
  REQUIRE(curvlab_distance(h.m, 0.0, 0.0, 0.5, 0.0, &opt, &d) == CURVLAB_OK);
  CHECK(d == doctest::Approx(0.31240).epsilon(0.03));

  curvlab_field* f = nullptr;
  REQUIRE(curvlab_distance_field(h.m, 0.0, 0.0, &opt, &f) == CURVLAB_OK);
  int nx = 0, ny = 0;
  REQUIRE(curvlab_field_size(f, &nx, &ny) == CURVLAB_OK);
  CHECK(nx == 129);
  CHECK(ny == 129);
  double at = 0.0;
  REQUIRE(curvlab_field_at(f, 0.5, 0.0, &at) == CURVLAB_OK);
  CHECK(at == doctest::Approx(d).epsilon(1e-9));
  double corner = 0.0;
  REQUIRE(curvlab_field_value(f, 0, 0, &corner) == CURVLAB_OK);
  CHECK(corner > 0.5);
  CHECK(curvlab_field_value(f, -1, 0, &corner) == CURVLAB_E_INVALID_ARGUMENT);

  auto dir = std::filesystem::temp_directory_path() / "curvlab_tests" / "capi";
  std::filesystem::create_directories(dir);
  std::string csv = (dir / "field.csv").string();
  std::string side = (dir / "field.json").string();
  REQUIRE(curvlab_field_export(f, csv.c_str(), side.c_str()) == CURVLAB_OK);
  CHECK(std::filesystem::file_size(csv) > 1000);
  CHECK(std::filesystem::file_size(side) > 10);
  curvlab_field_free(f);
}

TEST_CASE("C API: list builtins") {
  char* text = nullptr;
  REQUIRE(curvlab_list_builtins(&text) == CURVLAB_OK);
  std::string cat(text);
  for (const char* name : {"cone", "multicone", "hulin-troyanov", "abs-line", "torus-dipole"})
    CHECK(cat.find(name) != std::string::npos);
  curvlab_string_free(text);
}

TEST_CASE("C API: scenario runner status codes") {
  auto dir = std::filesystem::temp_directory_path() / "curvlab_tests" / "capi_scen";
  std::filesystem::create_directories(dir);

  // config error: missing file
  CHECK(curvlab_run_scenario("/no/such/file.toml", dir.string().c_str(), nullptr) ==
        CURVLAB_E_IO);

  // a tiny passing scenario
  auto toml = dir / "ok.toml";
  {
    FILE* f = std::fopen(toml.string().c_str(), "wb");
    std::fputs(
        "[metric]\nbuiltin = \"cone\"\nbeta = 0.3\n\n[grid]\ncells = 96\n\n"
        "[experiment]\nkind = \"gauss-bonnet\"\nannuli = 4\n",
        f);
    std::fclose(f);
  }
  CHECK(curvlab_run_scenario(toml.string().c_str(), (dir / "out").string().c_str(), nullptr) ==
        CURVLAB_OK);

  // failing assertion: impossible expected area ratio
  auto bad = dir / "fail.toml";
  {
    FILE* f = std::fopen(bad.string().c_str(), "wb");
    std::fputs(
        "[metric]\nbuiltin = \"cone\"\nbeta = 0.3\n\n[grid]\ncells = 64\n\n"
        "[experiment]\nkind = \"area\"\nradii = [0.25]\nexpected_ratio = 9.9\n",
        f);
    std::fclose(f);
  }
  CHECK(curvlab_run_scenario(bad.string().c_str(), (dir / "out2").string().c_str(), nullptr) ==
        CURVLAB_E_ASSERTION_FAILED);
}
