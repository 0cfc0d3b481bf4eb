// curvlab command line front end. Talks to the core strictly through the C
// API in curvlab/curvlab.h.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "curvlab/curvlab.h"

namespace {

int exit_code_for(curvlab_status status) {
  if (status == CURVLAB_OK) return 0;
  if (status == CURVLAB_E_ASSERTION_FAILED) return 1;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: geodesic distance and curvature-measure experiments for singular "
               "conformal metrics"};
  app.require_subcommand(1);

  // run <scenario.toml> --out <dir> [--stencil N] [--grid N] [--threads N]
  std::string scenario_path, out_dir = "out";
  int stencil = 0, grid = 0, threads = 0;
  CLI::App* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario TOML file")->required();
  run->add_option("--out", out_dir, "output directory for reports");
  run->add_option("--stencil", stencil, "override stencil (8, 16 or 32)");
  run->add_option("--grid", grid, "override lattice cells across the extent");
  run->add_option("--threads", threads, "worker threads (default CURVLAB_THREADS or 1)");

  CLI::App* list = app.add_subcommand("list", "list builtin metrics");

  // distance <x0> <y0> <x1> <y1> --metric name [--params json]
  std::string metric_name = "cone", params_json;
  std::vector<double> coords;
  CLI::App* dist = app.add_subcommand("distance", "geodesic distance between two points");
  dist->add_option("coords", coords, "x0 y0 x1 y1")->expected(4);
  dist->add_option("--metric", metric_name, "builtin metric name");
  dist->add_option("--params", params_json, "builtin parameters as JSON");
  dist->add_option("--stencil", stencil, "stencil (8, 16 or 32)");
  dist->add_option("--grid", grid, "lattice cells across the extent");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    curvlab_run_options opt{stencil, grid, threads};
    curvlab_status status = curvlab_run_scenario(scenario_path.c_str(), out_dir.c_str(), &opt);
    if (status == CURVLAB_OK) {
      std::printf("PASS: all scenario assertions hold (reports in %s)\n", out_dir.c_str());
    } else if (status == CURVLAB_E_ASSERTION_FAILED) {
      std::fprintf(stderr, "FAIL: %s (reports in %s)\n", curvlab_last_error(), out_dir.c_str());
    } else {
      std::fprintf(stderr, "error (%s): %s\n", curvlab_status_name(status),
                   curvlab_last_error());
    }
    return exit_code_for(status);
  }

  if (list->parsed()) {
    char* text = nullptr;
    curvlab_status status = curvlab_list_builtins(&text);
    if (status != CURVLAB_OK) {
      std::fprintf(stderr, "error: %s\n", curvlab_last_error());
      return 2;
    }
    std::fputs(text, stdout);
    curvlab_string_free(text);
    return 0;
  }

  if (dist->parsed()) {
    curvlab_metric* metric = nullptr;
    curvlab_status status = curvlab_metric_create_builtin(
        metric_name.c_str(), params_json.empty() ? nullptr : params_json.c_str(), &metric);
    if (status != CURVLAB_OK) {
      std::fprintf(stderr, "error (%s): %s\n", curvlab_status_name(status), curvlab_last_error());
      return 2;
    }
    curvlab_grid_options gopt{grid, stencil};
    double value = 0.0;
    status = curvlab_distance(metric, coords[0], coords[1], coords[2], coords[3], &gopt, &value);
    curvlab_metric_free(metric);
    if (status != CURVLAB_OK) {
      std::fprintf(stderr, "error (%s): %s\n", curvlab_status_name(status), curvlab_last_error());
      return 2;
    }
    std::printf("%.10g\n", value);
    return 0;
  }

  return 2;
}
