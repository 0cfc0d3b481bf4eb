#include "curvlab/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "curvlab/geometry.hpp"

namespace curvlab {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw Error(ErrorCode::ConfigError,
              "scenario line " + std::to_string(line_no) + ": " + what);
}

void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

nlohmann::json parse_value(const std::string& s, size_t& pos, int line_no);

nlohmann::json parse_array(const std::string& s, size_t& pos, int line_no) {
  nlohmann::json arr = nlohmann::json::array();
  ++pos;  // consume '['
  while (true) {
    skip_ws(s, pos);
    if (pos >= s.size()) fail(line_no, "unterminated array");
    if (s[pos] == ']') {
      ++pos;
      return arr;
    }
    arr.push_back(parse_value(s, pos, line_no));
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < s.size() && s[pos] == ']') {
      ++pos;
      return arr;
    }
    fail(line_no, "expected ',' or ']' in array");
  }
}

nlohmann::json parse_value(const std::string& s, size_t& pos, int line_no) {
  skip_ws(s, pos);
  if (pos >= s.size()) fail(line_no, "missing value");
  char c = s[pos];
  if (c == '[') return parse_array(s, pos, line_no);
  if (c == '"') {
    std::string out;
    ++pos;
    while (pos < s.size() && s[pos] != '"') {
      if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
      out += s[pos++];
    }
    if (pos >= s.size()) fail(line_no, "unterminated string");
    ++pos;
    return out;
  }
  // bare token: bool or number
  size_t start = pos;
  while (pos < s.size() && s[pos] != ',' && s[pos] != ']' && s[pos] != '#' && s[pos] != ' ' &&
         s[pos] != '\t')
    ++pos;
  std::string tok = s.substr(start, pos - start);
  if (tok == "true") return true;
  if (tok == "false") return false;
  try {
    size_t used = 0;
    if (tok.find_first_of(".eE") == std::string::npos) {
      long long v = std::stoll(tok, &used);
      if (used == tok.size()) return v;
    }
    double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (...) {
  }
  fail(line_no, "cannot parse value '" + tok + "'");
}

}  // namespace

namespace {

// Strip the comment tail (outside strings) and report the bracket depth so
// multi-line arrays can be joined into one logical line.
std::string strip_comment(const std::string& line, int& depth) {
  std::string out;
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_string) {
      if (c == '\\' && i + 1 < line.size()) {
        out += c;
        out += line[++i];
        continue;
      }
      if (c == '"') in_string = false;
      out += c;
      continue;
    }
    if (c == '#') break;
    if (c == '"') in_string = true;
    if (c == '[') ++depth;
    if (c == ']') --depth;
    out += c;
  }
  return out;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    int depth = 0;
    std::string line = strip_comment(raw, depth);
    // a table header [name] closes its bracket on the same line
    while (depth > 0 && std::getline(in, raw)) {
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      line += ' ';
      line += strip_comment(raw, depth);
    }
    if (depth > 0) fail(line_no, "unterminated array");
    size_t pos = 0;
    skip_ws(line, pos);
    if (pos >= line.size() || line[pos] == '#') continue;
    if (line[pos] == '[') {
      size_t close = line.find(']', pos);
      if (close == std::string::npos) fail(line_no, "unterminated table header");
      std::string name = line.substr(pos + 1, close - pos - 1);
      if (name.empty()) fail(line_no, "empty table name");
      table = &root[name];
      if (table->is_null()) *table = nlohmann::json::object();
      continue;
    }
    size_t eq = line.find('=', pos);
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = line.substr(pos, eq - pos);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key.empty()) fail(line_no, "empty key");
    size_t vpos = eq + 1;
    nlohmann::json value = parse_value(line, vpos, line_no);
    skip_ws(line, vpos);
    if (vpos < line.size() && line[vpos] != '#') fail(line_no, "trailing characters after value");
    (*table)[key] = std::move(value);
  }
  return root;
}

nlohmann::json parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

}  // namespace curvlab
