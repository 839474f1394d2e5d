#ifndef GESTUREHMM_TOML_HPP
#define GESTUREHMM_TOML_HPP

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gesturehmm/core.hpp"

namespace gesturehmm {

// Minimal TOML subset: [section] headers, key = value lines, values being
// strings, numbers, booleans or flat arrays thereof. Enough to mirror the
// experiment config; not a general TOML parser.
class TomlTable {
 public:
  static TomlTable parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  static TomlTable parse(const std::string& text, const std::string& origin = "<string>") {
    TomlTable t;
    std::string section;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        if (s.back() != ']')
          throw ParseError(origin + ":" + std::to_string(line_no) + ": malformed section header");
        section = strip(s.substr(1, s.size() - 2));
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ParseError(origin + ":" + std::to_string(line_no) + ": expected key = value");
      std::string key = strip(s.substr(0, eq));
      std::string value = strip(s.substr(eq + 1));
      if (auto hash = find_comment(value); hash != std::string::npos)
        value = strip(value.substr(0, hash));
      t.values_[section.empty() ? key : section + "." + key] = value;
    }
    return t;
  }

  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return unquote(it->second);
  }

  double get_number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw ParseError("config key '" + key + "': not a number: " + it->second);
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw ParseError("config key '" + key + "': not a boolean: " + it->second);
  }

  std::vector<double> get_number_array(const std::string& key,
                                       const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      throw ParseError("config key '" + key + "': not an array: " + v);
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::string si = strip(item);
      if (si.empty()) continue;
      try {
        out.push_back(std::stod(si));
      } catch (const std::exception&) {
        throw ParseError("config key '" + key + "': bad array element: " + si);
      }
    }
    return out;
  }

 private:
  static std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  static std::size_t find_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') in_str = !in_str;
      if (s[i] == '#' && !in_str) return i;
    }
    return std::string::npos;
  }

  static std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
      return s.substr(1, s.size() - 2);
    return s;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace gesturehmm

#endif
