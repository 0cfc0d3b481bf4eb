#ifndef CURVLAB_SCENARIO_HPP
#define CURVLAB_SCENARIO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/report.hpp"

namespace curvlab {

struct ScenarioOverrides {
  int stencil = 0;   // 0 = take from file / default
  int grid = 0;      // cells per side across the extent
  int threads = 0;   // 0 = CURVLAB_THREADS or 1
};

struct ScenarioOutcome {
  bool all_pass = true;
  std::vector<std::string> report_files;
  std::vector<ExperimentReport> reports;
};

// Executes the experiment described by a scenario file ([metric], [grid],
// [experiment] tables) and writes CSV + JSON reports into out_dir. Throws
// Error (ConfigError naming the offending key, or any module error with
// scenario context).
ScenarioOutcome run_scenario(const std::string& config_path, const std::string& out_dir,
                             const ScenarioOverrides& overrides = {});

ScenarioOutcome run_scenario_config(const nlohmann::json& config, const std::string& out_dir,
                                    const ScenarioOverrides& overrides = {});

int scenario_thread_count(const ScenarioOverrides& overrides);

}  // namespace curvlab

#endif
