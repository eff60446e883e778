#pragma once

#include <stdexcept>
#include <string>

namespace mvn {

/// Malformed or non-finite input data (bad dataset cell, NaN entry, n too small).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sample covariance matrix is (numerically) singular.
class SingularCovariance : public InputError {
 public:
  SingularCovariance(double smallest, double largest)
      : InputError("sample covariance is singular (smallest eigenvalue " + std::to_string(smallest) +
                   ", largest " + std::to_string(largest) +
                   "); need n >= d+1 observations in general position"),
        smallest_(smallest),
        largest_(largest) {}

  double smallest_eigenvalue() const noexcept { return smallest_; }
  double largest_eigenvalue() const noexcept { return largest_; }

 private:
  double smallest_;
  double largest_;
};

/// A tuning parameter is outside the domain where the statistic exists.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent simulation or CLI configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every candidate direction of a sphere search had a vanishing denominator.
class DegenerateObjective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Monte Carlo replication failed; the message names the replication and seed.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvn
