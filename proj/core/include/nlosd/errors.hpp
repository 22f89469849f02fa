#pragma once

#include <stdexcept>
#include <string>

namespace nlosd {

/// Invalid or inconsistent configuration (bad field values, unknown keys).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or incompatible data file (bad magic, version, dimensions).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlosd
