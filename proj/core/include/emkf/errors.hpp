#pragma once

#include <stdexcept>
#include <string>

namespace emkf {

/// Shapes of the supplied matrices/vectors do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that must have full row rank does not.
class RankError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Kalman recursion cannot proceed (singular innovation covariance,
/// update without a prediction, rejected model).
class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The M-step was asked to solve with no accumulated transition pairs.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration key was unknown, malformed or out of range.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace emkf
