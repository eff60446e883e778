#include "mvn/validation.hpp"

#include "mvn/errors.hpp"
#include "mvn/parallel.hpp"
#include "mvn/random.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace mvn {
namespace {

constexpr std::uint64_t kBootstrapTag = 0x626f6f74ull;  // "boot"

void require_l2(const TestSpec& test) {
  if (!is_weighted_l2(test.statistic)) {
    throw ConfigError(test.id() + ": distance estimation is only available for the weighted L2 family");
  }
}

double z_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

// Distinct rows of x (exact equality) and how often each occurs.
struct Compressed {
  Matrix rows;
  std::vector<std::int64_t> counts;
  std::vector<Index> owner;  // original row -> distinct row
};

Compressed compress(const Matrix& x) {
  const Index n = x.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](Index a, Index b) {
    for (Index c = 0; c < x.cols(); ++c) {
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  Compressed out;
  out.owner.assign(static_cast<std::size_t>(n), 0);
  std::vector<Index> firsts;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Index r = order[i];
    if (i == 0 || x.row(r) != x.row(order[i - 1])) {
      firsts.push_back(r);
      out.counts.push_back(0);
    }
    out.owner[static_cast<std::size_t>(r)] = static_cast<Index>(firsts.size() - 1);
    ++out.counts.back();
  }
  out.rows.resize(static_cast<Index>(firsts.size()), x.cols());
  for (std::size_t i = 0; i < firsts.size(); ++i) out.rows.row(static_cast<Index>(i)) = x.row(firsts[i]);
  return out;
}

}  // namespace

double delta_hat(const TestSpec& test, const Sample& sample) {
  require_l2(test);
  return evaluate(test, standardize(sample)).raw / static_cast<double>(sample.n());
}

DeltaEstimate bootstrap_delta(const TestSpec& test, const Sample& sample, int replications, std::uint64_t seed,
                              int threads) {
  require_l2(test);
  if (replications < 200) throw ConfigError("bootstrap needs at least 200 replications");
  const Index n = sample.n();
  const double nd = static_cast<double>(n);
  const Compressed base = compress(sample.data());

  DeltaEstimate est;
  est.test = test;
  est.n = n;
  est.replications = replications;
  est.delta_hat = delta_hat(test, sample);

  const std::uint64_t s = derive_seed(seed, kBootstrapTag);
  std::vector<double> values(static_cast<std::size_t>(replications));
  parallel_for(replications, threads, [&](std::int64_t b) {
    Stream rng(s, static_cast<std::uint64_t>(b));
    std::vector<std::int64_t> counts(static_cast<std::size_t>(base.rows.rows()), 0);
    for (Index i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>(base.owner[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))])];
    }
    std::vector<Index> used;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] > 0) used.push_back(static_cast<Index>(k));
    }
    const auto m = static_cast<Index>(used.size());
    Matrix rows(m, base.rows.cols());
    Vector w(m);
    for (Index k = 0; k < m; ++k) {
      rows.row(k) = base.rows.row(used[static_cast<std::size_t>(k)]);
      w(k) = static_cast<double>(counts[static_cast<std::size_t>(used[static_cast<std::size_t>(k)])]) / nd;
    }
    try {
      const Matrix y = standardize_weighted(rows, w);
      values[static_cast<std::size_t>(b)] = evaluate_weighted(test, y, w, nd) / nd;
    } catch (const SingularCovariance& e) {
      throw SimulationError("bootstrap replicate " + std::to_string(b) + " has a singular covariance: " + e.what());
    }
  });

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / replications;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  est.variance = ss / (replications - 1);
  est.sigma_hat = std::sqrt(est.variance * nd);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  est.degenerate = *lo == *hi;
  return est;
}

ConfidenceInterval bootstrap_ci(const TestSpec& test, const Sample& sample, double alpha, int replications,
                                std::uint64_t seed, int threads) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  ConfidenceInterval ci;
  ci.estimate = bootstrap_delta(test, sample, replications, seed, threads);
  ci.level = 1.0 - alpha;
  const double half = z_quantile(1.0 - 0.5 * alpha) * std::sqrt(ci.estimate.variance);
  ci.lower = ci.estimate.delta_hat - half;
  ci.upper = ci.estimate.delta_hat + half;
  return ci;
}

NeighborhoodDecision neighborhood_decision(const DeltaEstimate& estimate, double delta0, double alpha) {
  if (!(delta0 > 0.0)) throw ConfigError("delta0 must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  NeighborhoodDecision out;
  out.delta_hat = estimate.delta_hat;
  out.sigma_hat = estimate.sigma_hat;
  out.degenerate = estimate.degenerate;
  out.threshold = delta0 - z_quantile(1.0 - alpha) * estimate.sigma_hat / std::sqrt(static_cast<double>(estimate.n));
  out.reject = estimate.delta_hat <= out.threshold;
  return out;
}

NeighborhoodDecision neighborhood_test(const TestSpec& test, const Sample& sample, double delta0, double alpha,
                                       int replications, std::uint64_t seed, int threads) {
  return neighborhood_decision(bootstrap_delta(test, sample, replications, seed, threads), delta0, alpha);
}

}  // namespace mvn
