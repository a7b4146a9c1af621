#pragma once

#include <stdexcept>
#include <string>

namespace degpath {

/// Invalid run configuration (bad keys, out-of-range values). CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data. CLI exit code 3.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sampling could not start or produced unusable output. CLI exit code 4.
struct SamplerError : std::runtime_error {
  explicit SamplerError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace degpath
