#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "modecast/io.hpp"

// Flat key=value configuration text: one entry per line, '#' comments,
// nested sections spelled as dotted prefixes (pso.population=30). The store
// tracks which keys were read so callers can reject typos wholesale.

namespace modecast {

/// A configuration problem caused by the invocation (bad key, bad value,
/// malformed file) — a usage error, not a runtime failure.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse_text(const std::string& text) {
    KeyValueConfig config;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find('\n', start);
      const auto raw = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
      start = end == std::string::npos ? text.size() + 1 : end + 1;
      ++line_number;
      const auto line = std::string(trim(raw));
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("config line " + std::to_string(line_number) + ": expected key=value, got '" +
                          line + "'");
      const auto key = std::string(trim(line.substr(0, eq)));
      const auto value = std::string(trim(line.substr(eq + 1)));
      config.entries_[key] = value;
    }
    return config;
  }

  static KeyValueConfig load(const std::filesystem::path& path) {
    try {
      return parse_text(read_file(path));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::runtime_error&) {
      throw ConfigError("cannot read config file: " + path.string());
    }
  }

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
    touched_.insert(key);
    return it->second;
  }

  std::string get_string_or(const std::string& key, const std::string& fallback) const {
    touched_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
  }

  double get_real(const std::string& key) const {
    const auto value = parse_real(get_string(key));
    if (!value) throw ConfigError("config key '" + key + "' is not a number");
    return *value;
  }

  double get_real_or(const std::string& key, double fallback) const {
    touched_.insert(key);
    return has(key) ? get_real(key) : fallback;
  }

  long long get_integer(const std::string& key) const {
    const auto value = parse_integer(get_string(key));
    if (!value) throw ConfigError("config key '" + key + "' is not an integer");
    return *value;
  }

  long long get_integer_or(const std::string& key, long long fallback) const {
    touched_.insert(key);
    return has(key) ? get_integer(key) : fallback;
  }

  bool get_flag_or(const std::string& key, bool fallback) const {
    touched_.insert(key);
    if (!has(key)) return fallback;
    const auto value = get_string(key);
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw ConfigError("config key '" + key + "' must be 0/1/true/false");
  }

  /// Keys present in the store that no getter ever asked for — typos, most
  /// likely.
  std::vector<std::string> untouched_keys() const {
    std::vector<std::string> keys;
    for (const auto& [key, value] : entries_)
      if (touched_.count(key) == 0) keys.push_back(key);
    return keys;
  }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> touched_;
};

}  // namespace modecast
