#include "degpath/runconfig.hpp"

#include <fstream>
#include <sstream>

#include "degpath/errors.hpp"

namespace degpath {

namespace {
std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
    cfg.values_[key] = value;
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require_string(const std::string& key) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required config key: " + key);
  return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: '" + it->second + "'");
  }
}

long RunConfig::get_long(const std::string& key, long fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not an integer: '" + it->second + "'");
  }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key " + key + ": not a boolean: '" + v + "'");
}

namespace {
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}
}  // namespace

std::vector<double> RunConfig::get_doubles(const std::string& key,
                                           std::vector<double> fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number list: '" + it->second + "'");
    }
  }
  return out;
}

std::vector<long> RunConfig::get_longs(const std::string& key, std::vector<long> fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long> out;
  for (const auto& item : split_list(it->second)) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not an integer list: '" + it->second + "'");
    }
  }
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key,
                                                std::vector<std::string> fallback) {
  consumed_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return split_list(it->second);
}

void RunConfig::finish() const {
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key))
      throw ConfigError("unknown config key: " + key);
}

}  // namespace degpath
