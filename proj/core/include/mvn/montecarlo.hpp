#pragma once

#include "mvn/alternatives.hpp"
#include "mvn/sample.hpp"
#include "mvn/test_spec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvn {

/// Index rule for empirical quantiles: the order statistic at ceil(q R) (1-based).
inline constexpr const char* kQuantileRule = "order-statistic-ceil";

struct SimulationConfig {
  TestSpec test;
  Index d = 2;
  Index n = 20;
  double alpha = 0.05;
  std::int64_t replications = 10000;
  std::uint64_t seed = 1;
  int threads = 0;  ///< worker cap; 0 means hardware concurrency. Never affects results.

  /// Throws ConfigError unless R >= 100, alpha in (0, 1), d >= 1 and n >= d + 1.
  void validate() const;
  /// Text identifying everything that determines the simulated values.
  std::string canonical() const;
};

/// Scaled null values in ascending order, as simulated for one configuration.
struct NullDistribution {
  SimulationConfig config;
  std::vector<double> sorted;
  std::int64_t nonconverged = 0;  ///< replications whose sphere search hit its cap
  double wall_seconds = 0.0;
};

struct CriticalValueRecord {
  SimulationConfig config;
  double upper = 0.0;                 ///< reject when the scaled statistic exceeds this
  std::optional<double> lower;        ///< two-sided tests also reject below this
  double table_quantile = 0.0;        ///< (1 - alpha) quantile, the one-sided reference value
  std::string scale;                  ///< scale_description() of the test
  std::string quantile_rule = kQuantileRule;
  std::string engine_version;
  std::int64_t nonconverged = 0;
  double wall_seconds = 0.0;

  bool rejects(double scaled) const { return scaled > upper || (lower && scaled < *lower); }
};

/// Order statistic at ceil(q R), 1-based, of an ascending vector.
double order_quantile(const std::vector<double>& sorted, double q);

/// Seeds of the null and alternative simulations derived from one master seed.
std::uint64_t null_seed(std::uint64_t master);
std::uint64_t power_seed(std::uint64_t master);

/// Replication i draws N_d(0, I) data from Stream(null_seed(seed), i).
NullDistribution simulate_null(const SimulationConfig& config);

CriticalValueRecord critical_value(const NullDistribution& null);
CriticalValueRecord critical_value(const SimulationConfig& config);

struct PowerResult {
  double rate = 0.0;
  std::int64_t rejections = 0;
  std::int64_t replications = 0;
  std::int64_t nonconverged = 0;
};

/// Fraction of R alternative samples (Stream(power_seed(seed), i)) whose scaled
/// statistic falls in the rejection region of `crit`.
PowerResult empirical_power(const TestSpec& test, const AlternativeSpec& alt, Index n,
                            const CriticalValueRecord& crit, std::int64_t replications,
                            std::uint64_t seed, int threads = 0);

/// (1 + #{null >= observed}) / (R + 1); two-sided tests double the smaller tail, capped at 1.
double mc_pvalue(const NullDistribution& null, double observed_scaled);

struct PValueResult {
  double raw = 0.0;
  double scaled = 0.0;
  double p = 1.0;
  bool converged = true;
};

/// Simulates the null for (test, d, n) and returns the p-value of the sample.
PValueResult mc_pvalue(const TestSpec& test, const Sample& sample, std::int64_t replications,
                       std::uint64_t seed, int threads = 0);

}  // namespace mvn
