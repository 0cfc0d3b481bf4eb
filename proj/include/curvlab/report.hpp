#ifndef CURVLAB_REPORT_HPP
#define CURVLAB_REPORT_HPP

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace curvlab {

// Tabular record of an experiment. CSV output is deterministic: fixed number
// formatting, no wall-clock fields, no absolute paths. The JSON twin carries
// the full configuration echo (and may carry a timestamp).
class ExperimentReport {
public:
  using Cell = std::variant<double, long long, std::string, bool>;

  explicit ExperimentReport(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_columns(std::vector<std::string> cols) { columns_ = std::move(cols); }
  void add_row(std::vector<Cell> row);
  size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<Cell>& row(size_t i) const { return rows_[i]; }
  double number(size_t row, const std::string& column) const;

  // Aggregate PASS: true when every bool cell in a "pass" column is true
  // (vacuously true when there is no such column).
  bool all_pass() const;

  void set_config(nlohmann::json config) { config_ = std::move(config); }
  const nlohmann::json& config() const { return config_; }

  static std::string format_number(double v);
  std::string csv() const;
  nlohmann::json json_twin(bool with_timestamp = true) const;

  void write_csv(const std::string& path) const;
  void write_json(const std::string& path, bool with_timestamp = true) const;

private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  nlohmann::json config_ = nlohmann::json::object();
};

}  // namespace curvlab

#endif
