#pragma once

#include "mvn/sample.hpp"
#include "mvn/test_spec.hpp"

#include <cstdint>

namespace mvn {

/// T_n / n, the plug-in estimate of the population distance Delta for a weighted
/// L2 statistic. Throws ConfigError for other tests.
double delta_hat(const TestSpec& test, const Sample& sample);

struct DeltaEstimate {
  TestSpec test;
  Index n = 0;
  double delta_hat = 0.0;
  double variance = 0.0;  ///< bootstrap variance of delta_hat, i.e. sigma_hat^2 / n
  double sigma_hat = 0.0; ///< bootstrap standard deviation of sqrt(n) * delta_hat
  int replications = 0;
  bool degenerate = false;  ///< every bootstrap replicate gave the same value
};

/// Nonparametric bootstrap: resample rows with replacement, restandardise and
/// recompute. Replicate b uses Stream(derived seed, b). Requires B >= 200.
DeltaEstimate bootstrap_delta(const TestSpec& test, const Sample& sample, int replications,
                              std::uint64_t seed, int threads = 0);

struct ConfidenceInterval {
  DeltaEstimate estimate;
  double level = 0.0;
  double lower = 0.0;  ///< may be negative; not truncated
  double upper = 0.0;
};

/// delta_hat -/+ z_{1-alpha/2} sigma_hat / sqrt(n).
ConfidenceInterval bootstrap_ci(const TestSpec& test, const Sample& sample, double alpha, int replications,
                                std::uint64_t seed, int threads = 0);

struct NeighborhoodDecision {
  bool reject = false;  ///< true: the data support Delta < delta0
  double delta_hat = 0.0;
  double sigma_hat = 0.0;
  double threshold = 0.0;  ///< delta0 - z_{1-alpha} sigma_hat / sqrt(n)
  bool degenerate = false;
};

/// Test of H: Delta >= delta0 against Delta < delta0; rejects when
/// delta_hat <= delta0 - z_{1-alpha} sigma_hat / sqrt(n).
NeighborhoodDecision neighborhood_test(const TestSpec& test, const Sample& sample, double delta0, double alpha,
                                       int replications, std::uint64_t seed, int threads = 0);

/// Same rule applied to an existing estimate.
NeighborhoodDecision neighborhood_decision(const DeltaEstimate& estimate, double delta0, double alpha);

}  // namespace mvn
