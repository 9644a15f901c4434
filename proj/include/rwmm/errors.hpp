#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwmm {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One problem found while validating a configuration.
struct ConfigIssue {
  std::size_t line = 0;  // 0 when the issue is not tied to a line
  std::string message;
};

/// Invalid configuration. Carries every issue found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message);
  explicit ConfigError(std::vector<ConfigIssue> issues);

  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// An exhaustive enumeration would exceed the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (bad indices, inconsistent sequences, corrupt files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Index or count beyond what a trace holds.
class RangeError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Enumeration cap; RWMM_ENUM_CAP overrides the default.
std::size_t enumeration_cap();

}  // namespace rwmm
