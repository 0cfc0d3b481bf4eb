#include "curvlab/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "curvlab/approx.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/cylinder.hpp"
#include "curvlab/geodesic.hpp"
#include "curvlab/metric.hpp"
#include "curvlab/toml.hpp"

namespace curvlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

[[noreturn]] void config_fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "scenario key '" + key + "': " + what);
}

double need_number(const nlohmann::json& t, const std::string& key) {
  if (!t.contains(key)) config_fail(key, "missing");
  const auto& v = t.at(key);
  if (!v.is_number()) config_fail(key, "expected a number");
  return v.get<double>();
}

std::vector<double> number_list(const nlohmann::json& t, const std::string& key) {
  if (!t.contains(key) || !t.at(key).is_array()) config_fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : t.at(key)) {
    if (!v.is_number()) config_fail(key, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Point point_param(const nlohmann::json& t, const std::string& key, Point dflt) {
  if (!t.contains(key)) return dflt;
  const auto& v = t.at(key);
  if (!v.is_array() || v.size() != 2) config_fail(key, "expected [x, y]");
  return {v.at(0).get<double>(), v.at(1).get<double>()};
}

struct ScenarioContext {
  ConformalMetric metric;
  nlohmann::json config;
  int grid_cells;
  int stencil;
  int threads;
  std::string out_dir;
};

GridGraph make_graph(const ScenarioContext& ctx) {
  GridGraph graph(ctx.metric.background, ctx.grid_cells, ctx.stencil);
  graph.bind_atoms(ctx.metric);
  return graph;
}

void emit(ScenarioOutcome& outcome, const ScenarioContext& ctx, ExperimentReport report) {
  std::filesystem::create_directories(ctx.out_dir);
  nlohmann::json cfg = report.config();
  cfg["scenario"] = ctx.config;
  report.set_config(cfg);
  std::string base = (std::filesystem::path(ctx.out_dir) / report.name()).string();
  report.write_csv(base + ".csv");
  report.write_json(base + ".json");
  outcome.report_files.push_back(base + ".csv");
  outcome.report_files.push_back(base + ".json");
  outcome.all_pass = outcome.all_pass && report.all_pass();
  outcome.reports.push_back(std::move(report));
}

void run_distance_field(const ScenarioContext& ctx, const nlohmann::json& exp,
                        ScenarioOutcome& outcome) {
  Point source = point_param(exp, "source", {0.0, 0.0});
  GridGraph graph = make_graph(ctx);
  DistanceSolver solver(graph, ctx.metric);
  solver.prefill(ctx.threads);
  DistanceField field = solver.solve(source);

  std::filesystem::create_directories(ctx.out_dir);
  std::string csv_path = (std::filesystem::path(ctx.out_dir) / "distance_field.csv").string();
  std::ofstream csv(csv_path, std::ios::binary);
  csv << "x,y,value\n";
  for (int idx = 0; idx < graph.node_count(); ++idx) {
    Point p = graph.node_pos(idx);
    csv << ExperimentReport::format_number(p.x) << ',' << ExperimentReport::format_number(p.y)
        << ',' << ExperimentReport::format_number(field.values[idx]) << '\n';
  }
  csv.close();
  nlohmann::json sidecar{{"source", {source.x, source.y}},
                         {"h", graph.spacing()},
                         {"stencil", graph.stencil()},
                         {"nx", graph.nx()},
                         {"ny", graph.ny()}};
  std::string side_path = (std::filesystem::path(ctx.out_dir) / "distance_field.json").string();
  std::ofstream side(side_path, std::ios::binary);
  side << sidecar.dump(2) << '\n';
  outcome.report_files.push_back(csv_path);
  outcome.report_files.push_back(side_path);

  ExperimentReport report("distance-field");
  report.set_columns({"nodes", "max_distance"});
  report.add_row({static_cast<long long>(graph.node_count()), field.max_finite()});
  emit(outcome, ctx, std::move(report));
}

void run_converge(const ScenarioContext& ctx, const nlohmann::json& exp,
                  ScenarioOutcome& outcome) {
  std::vector<double> eps = number_list(exp, "epsilons");
  std::vector<std::pair<Point, Point>> pairs;
  if (exp.contains("pairs")) {
    for (const auto& p : exp.at("pairs")) {
      if (!p.is_array() || p.size() != 4) config_fail("pairs", "expected [x0,y0,x1,y1] rows");
      pairs.push_back({{p.at(0).get<double>(), p.at(1).get<double>()},
                       {p.at(2).get<double>(), p.at(3).get<double>()}});
    }
  } else {
    config_fail("pairs", "missing");
  }
  double sup_tol = exp.value("sup_tol", 0.01);

  GridGraph graph = make_graph(ctx);
  ExperimentReport raw = reshetnyak_experiment(ctx.metric, graph, eps, pairs, ctx.threads);

  ExperimentReport report("converge");
  report.set_columns({"eps", "sup_err", "mean_err", "decreasing", "pass"});
  double prev = -1.0;
  for (size_t i = 0; i < raw.row_count(); ++i) {
    double e = raw.number(i, "eps");
    double sup = raw.number(i, "sup_err");
    double mean = raw.number(i, "mean_err");
    bool decreasing = prev < 0.0 || sup < prev;
    bool final_ok = (i + 1 < raw.row_count()) || sup < sup_tol;
    report.add_row({e, sup, mean, decreasing, decreasing && final_ok});
    prev = sup;
  }
  report.set_config({{"sup_tol", sup_tol}, {"pair_count", pairs.size()}});
  emit(outcome, ctx, std::move(report));
}

void run_three_circle(const ScenarioContext& ctx, const nlohmann::json& exp,
                      ScenarioOutcome& outcome) {
  ThreeCircleOptions opt;
  if (exp.contains("lambda")) opt.lambda_override = exp.at("lambda").get<double>();
  if (exp.contains("local_cells")) opt.annulus.local_cells = exp.at("local_cells").get<int>();
  opt.annulus.stencil = ctx.stencil;
  ExperimentReport report = three_circle_report(
      ctx.metric, point_param(exp, "center", {0.0, 0.0}), need_number(exp, "L"),
      static_cast<int>(exp.value("rings", 4)), need_number(exp, "kappa"), opt);
  emit(outcome, ctx, std::move(report));
}

void run_gauss_bonnet(const ScenarioContext& ctx, const nlohmann::json& exp,
                      ScenarioOutcome& outcome) {
  int n_annuli = exp.value("annuli", 20);
  unsigned seed = exp.value("seed", 12345u);
  double h = ctx.metric.background.extent.width() / ctx.grid_cells;
  double r_min = exp.value("r_min", 8.0 * h);
  double r_max = exp.value("r_max", 0.25 * ctx.metric.background.extent.width() / 2.0);
  Point center = point_param(exp, "center", {0.0, 0.0});

  ExperimentReport report("gauss-bonnet");
  report.set_columns({"check", "params", "lhs", "rhs", "residual", "pass"});

  for (const ConePoint& a : ctx.metric.atoms) {
    double detected = point_mass_detect(ctx.metric, a.location, h);
    double expected = -kTwoPi * a.beta;
    double residual = std::abs(detected - expected);
    bool pass = residual <= 0.01 * std::max(std::abs(expected), 1e-3);
    report.add_row({std::string("point-mass"),
                    "atom(" + ExperimentReport::format_number(a.location.x) + "," +
                        ExperimentReport::format_number(a.location.y) + ")",
                    detected, expected, residual, pass});
  }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < n_annuli; ++k) {
    double s = r_min + (r_max - r_min) * unif(rng);
    double t = r_min + (r_max - r_min) * unif(rng);
    if (s > t) std::swap(s, t);
    if (t - s < 0.05 * r_max) t = std::min(r_max, t + 0.05 * r_max);
    GbCheck check = gb_annulus_check(ctx.metric, center, s, t);
    report.add_row({std::string("gb-annulus"),
                    "s=" + ExperimentReport::format_number(s) +
                        " t=" + ExperimentReport::format_number(t),
                    check.lhs, check.rhs, check.residual, check.pass});
  }
  report.set_config({{"annuli", n_annuli}, {"seed", seed}, {"r_min", r_min}, {"r_max", r_max}});
  emit(outcome, ctx, std::move(report));
}

void run_area(const ScenarioContext& ctx, const nlohmann::json& exp, ScenarioOutcome& outcome) {
  std::vector<double> radii = number_list(exp, "radii");
  Point center = point_param(exp, "center", {0.0, 0.0});
  double expected = need_number(exp, "expected_ratio");
  double tol = exp.value("tol", 0.03);

  GridGraph graph = make_graph(ctx);
  ExperimentReport report("area");
  report.set_columns({"R", "area", "ratio", "expected", "pass"});
  for (double R : radii) {
    double area = ball_area(ctx.metric, graph, center, R);
    double ratio = area / (M_PI * R * R);
    report.add_row(
        {R, area, ratio, expected, std::abs(ratio - expected) <= tol * std::abs(expected)});
  }
  report.set_config({{"expected_ratio", expected}, {"tol", tol}});
  emit(outcome, ctx, std::move(report));
}

void run_completeness(const ScenarioContext& ctx, const nlohmann::json& exp,
                      ScenarioOutcome& outcome) {
  double delta = need_number(exp, "delta");
  std::vector<double> radii = number_list(exp, "radii");
  CompletenessOptions opt;
  if (exp.contains("local_cells")) opt.annulus.local_cells = exp.at("local_cells").get<int>();
  CompletenessResult result =
      completeness_probe(ctx.metric, point_param(exp, "center", {0.0, 0.0}), delta, radii, opt);

  std::string expected = exp.value("expected", "");
  bool verdict_ok = expected.empty() || expected == verdict_name(result.verdict);
  bool limit_ok = true;
  if (exp.contains("expected_limit")) {
    double lim = exp.at("expected_limit").get<double>();
    double tol = exp.value("limit_tol", 0.05);
    limit_ok = std::abs(result.last_value - lim) <= tol * std::abs(lim);
  }

  ExperimentReport report("completeness");
  report.set_columns({"r", "distance", "increment", "verdict", "pass"});
  for (size_t i = 0; i < result.report.row_count(); ++i) {
    report.add_row({result.report.number(i, "r"), result.report.number(i, "distance"),
                    result.report.number(i, "increment"), std::string(verdict_name(result.verdict)),
                    verdict_ok && limit_ok});
  }
  report.set_config({{"delta", delta}, {"expected", expected}});
  emit(outcome, ctx, std::move(report));
}

void run_ghost(const ScenarioContext& ctx, const nlohmann::json& exp, ScenarioOutcome& outcome) {
  std::vector<double> radii = number_list(exp, "radii");
  std::vector<double> eps = number_list(exp, "epsilons");
  GhostOptions opt;
  opt.corner_threshold = exp.value("threshold", 0.05);
  if (exp.contains("local_cells")) opt.local_cells = exp.at("local_cells").get<int>();
  ExperimentReport report =
      ghost_probe(ctx.metric, point_param(exp, "center", {0.0, 0.0}), radii, eps, opt);
  emit(outcome, ctx, std::move(report));
}

}  // namespace

int scenario_thread_count(const ScenarioOverrides& overrides) {
  if (overrides.threads > 0) return overrides.threads;
  if (const char* env = std::getenv("CURVLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

ScenarioOutcome run_scenario_config(const nlohmann::json& config, const std::string& out_dir,
                                    const ScenarioOverrides& overrides) {
  if (!config.contains("metric")) config_fail("metric", "missing [metric] table");
  if (!config.contains("experiment")) config_fail("experiment", "missing [experiment] table");
  nlohmann::json metric_table = config.at("metric");
  if (!metric_table.contains("builtin")) config_fail("metric.builtin", "missing");
  std::string builtin = metric_table.at("builtin").get<std::string>();
  metric_table.erase("builtin");

  ScenarioContext ctx{builtin_metric(builtin, metric_table), config, 0, 16, 1, out_dir};

  nlohmann::json grid = config.value("grid", nlohmann::json::object());
  double width = ctx.metric.background.extent.width();
  if (overrides.grid > 0)
    ctx.grid_cells = overrides.grid;
  else if (grid.contains("cells"))
    ctx.grid_cells = grid.at("cells").get<int>();
  else
    ctx.grid_cells = static_cast<int>(std::lround(width / grid.value("h", 1.0 / 256.0)));
  ctx.stencil = overrides.stencil > 0 ? overrides.stencil : grid.value("stencil", 16);
  ctx.threads = scenario_thread_count(overrides);

  const nlohmann::json& exp = config.at("experiment");
  if (!exp.contains("kind")) config_fail("experiment.kind", "missing");
  std::string kind = exp.at("kind").get<std::string>();

  ScenarioOutcome outcome;
  if (kind == "distance-field")
    run_distance_field(ctx, exp, outcome);
  else if (kind == "converge")
    run_converge(ctx, exp, outcome);
  else if (kind == "three-circle")
    run_three_circle(ctx, exp, outcome);
  else if (kind == "gauss-bonnet")
    run_gauss_bonnet(ctx, exp, outcome);
  else if (kind == "area")
    run_area(ctx, exp, outcome);
  else if (kind == "completeness")
    run_completeness(ctx, exp, outcome);
  else if (kind == "ghost")
    run_ghost(ctx, exp, outcome);
  else
    config_fail("experiment.kind", "unknown experiment '" + kind + "'");
  return outcome;
}

ScenarioOutcome run_scenario(const std::string& config_path, const std::string& out_dir,
                             const ScenarioOverrides& overrides) {
  return run_scenario_config(parse_toml_file(config_path), out_dir, overrides);
}

}  // namespace curvlab
