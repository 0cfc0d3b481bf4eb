#ifndef CURVLAB_TOML_HPP
#define CURVLAB_TOML_HPP

#include <string>

#include <json.hpp>

namespace curvlab {

// Minimal TOML subset sufficient for scenario files: [table] headers,
// key = value with strings, numbers, booleans and (nested) arrays, and #
// comments. Parsed into a JSON object keyed by table name. Throws
// ConfigError with the offending line on malformed input.
nlohmann::json parse_toml(const std::string& text);
nlohmann::json parse_toml_file(const std::string& path);

}  // namespace curvlab

#endif
