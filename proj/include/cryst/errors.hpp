#pragma once

#include <stdexcept>
#include <string>

namespace cryst {

/// Invalid input or configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size cap was exceeded (CLI exit code 3).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or search failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// A harness refused to run because a hypothesis of the checked statement
/// does not hold for the input (CLI exit code 1).
class CheckRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cryst
