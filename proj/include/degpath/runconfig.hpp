#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace degpath {

/// Flat key=value configuration: one `key = value` pair per line, `#`
/// comments, dotted keys for grouping (sampler.chains = 4). Values read
/// through the typed getters; unconsumed keys are rejected by finish().
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig empty() { return RunConfig(); }

  /// Command-line overrides; flags win over file values.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long get_long(const std::string& key, long fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback);
  std::vector<long> get_longs(const std::string& key, std::vector<long> fallback);
  std::vector<std::string> get_strings(const std::string& key,
                                       std::vector<std::string> fallback);

  /// Throws ConfigError when any key was never consumed.
  void finish() const;

  /// Config echo for manifests.
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace degpath
