#include "curvlab/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "curvlab/geometry.hpp"

namespace curvlab {

void ExperimentReport::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw Error(ErrorCode::InvalidArgument, "report row width mismatch");
  rows_.push_back(std::move(row));
}

double ExperimentReport::number(size_t row, const std::string& column) const {
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c] == column) {
      const Cell& cell = rows_.at(row).at(c);
      if (const auto* d = std::get_if<double>(&cell)) return *d;
      if (const auto* i = std::get_if<long long>(&cell)) return static_cast<double>(*i);
      if (const auto* b = std::get_if<bool>(&cell)) return *b ? 1.0 : 0.0;
      throw Error(ErrorCode::InvalidArgument, "cell is not numeric: " + column);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no such column: " + column);
}

bool ExperimentReport::all_pass() const {
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c] != "pass" && columns_[c] != "decreasing") continue;
    for (const auto& row : rows_) {
      if (const auto* b = std::get_if<bool>(&row[c])) {
        if (!*b) return false;
      }
    }
  }
  return true;
}

std::string ExperimentReport::format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

std::string cell_to_string(const ExperimentReport::Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return ExperimentReport::format_number(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return std::get<std::string>(cell);
}

nlohmann::json cell_to_json(const ExperimentReport::Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  if (const auto* b = std::get_if<bool>(&cell)) return *b;
  return std::get<std::string>(cell);
}

}  // namespace

std::string ExperimentReport::csv() const {
  std::string out;
  for (size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += cell_to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json ExperimentReport::json_twin(bool with_timestamp) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json r = nlohmann::json::object();
    for (size_t c = 0; c < row.size(); ++c) r[columns_[c]] = cell_to_json(row[c]);
    rows.push_back(std::move(r));
  }
  nlohmann::json j{{"name", name_}, {"config", config_}, {"columns", columns_}, {"rows", rows},
                   {"all_pass", all_pass()}};
  if (with_timestamp) {
    j["generated_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count();
  }
  return j;
}

void ExperimentReport::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << csv();
}

void ExperimentReport::write_json(const std::string& path, bool with_timestamp) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << json_twin(with_timestamp).dump(2) << '\n';
}

}  // namespace curvlab
