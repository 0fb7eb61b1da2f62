#pragma once

#include <stdexcept>
#include <string>

namespace nsreg {

/// Invalid user-supplied parameters (grid size, viscosity, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fields living on incompatible grids, or too few samples.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An API was called in a state it does not support.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A bound was evaluated at or past the time where it stops being finite.
class HorizonExceeded : public std::out_of_range {
 public:
  HorizonExceeded(const std::string& what, double horizon)
      : std::out_of_range(what), horizon_(horizon) {}
  double horizon() const noexcept { return horizon_; }

 private:
  double horizon_;
};

/// The time integrator produced non-finite or runaway coefficients.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, double last_valid_time)
      : std::runtime_error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace nsreg
