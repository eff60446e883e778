#pragma once

#include "mvn/sample.hpp"

#include <cstdint>
#include <functional>

namespace mvn {

/// Controls the multistart maximisation over the unit sphere used by the
/// Malkovich-Afifi, Cox-Small and Pudelko statistics.
struct SphereSearchConfig {
  int starts = 0;               ///< random unit-vector starts; 0 means max(2d, 100(d-1))
  int refine = 8;               ///< best candidates polished by simplex search
  int max_iters = 600;          ///< simplex iterations per polish run
  double tolerance = 1e-13;     ///< relative spread of simplex values at convergence
  std::uint64_t seed = 0x6d766e2d73656172ull;
  std::uint64_t stream = 0;

  /// Number of random starts actually used for dimension d.
  int effective_starts(Index d) const;
  /// Throws ConfigError on nonpositive tolerance, negative counts or too few starts.
  void validate(Index d) const;
};

struct SphereMaximum {
  double value = 0.0;
  Vector direction;
  bool converged = true;  ///< false when some polish run hit max_iters
  int evaluations = 0;
};

/// Objective on unit vectors. Returning NaN marks a direction as invalid; such
/// directions are never reported as the maximum.
using SphereObjective = std::function<double(const Eigen::Ref<const Vector>&)>;

/// Evaluates the objective at the 2d signed axes, the configured random starts and
/// every row of `extra_starts` (normalised; zero rows skipped), then polishes the
/// best `refine` candidates with a Nelder-Mead simplex in tangent coordinates. The
/// result is never below the objective at any evaluated start. If every direction
/// is invalid the returned value is NaN.
SphereMaximum maximize_on_sphere(const SphereObjective& objective, Index d,
                                 const SphereSearchConfig& config,
                                 const Matrix& extra_starts = Matrix());

struct SimplexResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead maximisation in R^m starting from a regular-axis
/// simplex of size `step` around x0. NaN values are treated as -infinity.
SimplexResult nelder_mead_maximize(const std::function<double(const Vector&)>& f, Vector x0,
                                   double step, int max_iters, double tolerance);

}  // namespace mvn
