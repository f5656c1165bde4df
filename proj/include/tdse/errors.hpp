#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tdse {

/// Invalid user-supplied configuration (bad value, missing key, inconsistent geometry).
/// The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values or a singular system during time stepping. Exit code 2.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t step, std::size_t index)
      : std::runtime_error(what), step_(step), index_(index) {}

  std::size_t step() const noexcept { return step_; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t step_;
  std::size_t index_;
};

}  // namespace tdse
