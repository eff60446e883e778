#include "mvn/montecarlo.hpp"

#include "mvn/errors.hpp"
#include "mvn/parallel.hpp"
#include "mvn/random.hpp"
#include "mvn/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace mvn {
namespace {

constexpr std::uint64_t kNullTag = 0x6e756c6cull;    // "null"
constexpr std::uint64_t kPowerTag = 0x706f7772ull;   // "powr"

struct Replicate {
  double scaled = 0.0;
  bool converged = true;
};

Replicate run_one(const TestSpec& test, Matrix x, Index d, std::uint64_t seed, std::int64_t i) {
  try {
    const ScaledResiduals y = standardize(Sample(std::move(x)));
    const StatisticValue v = evaluate(test, y);
    if (!std::isfinite(v.raw)) throw SimulationError("statistic is not finite");
    return {apply_scale(v.raw, test, d), v.converged};
  } catch (const std::exception& e) {
    throw SimulationError(test.id() + ": replication " + std::to_string(i) + " (stream seed " +
                          std::to_string(seed) + ") failed: " + e.what());
  }
}

}  // namespace

void SimulationConfig::validate() const {
  if (replications < 100) throw ConfigError("need at least 100 replications, got " + std::to_string(replications));
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1), got " + format_number(alpha));
  if (d < 1) throw ConfigError("dimension must be positive");
  if (n < d + 1) {
    throw ConfigError("sample size n = " + std::to_string(n) + " is too small for d = " + std::to_string(d) +
                      " (need n >= d + 1)");
  }
  if (test.statistic == Statistic::mq_f1 || test.statistic == Statistic::mq_f2) {
    if (d < 2) throw ConfigError(test.id() + " needs d >= 2");
  }
  if (test.statistic == Statistic::hjm && !test.hjm.allow_large && n > test.hjm.max_rows) {
    throw ConfigError(test.id() + ": n = " + std::to_string(n) + " exceeds the HJM size guard of " +
                      std::to_string(test.hjm.max_rows) + " rows");
  }
}

std::string SimulationConfig::canonical() const {
  return "test=" + test.id() + ";d=" + std::to_string(d) + ";n=" + std::to_string(n) +
         ";alpha=" + format_number(alpha) + ";R=" + std::to_string(replications) +
         ";seed=" + std::to_string(seed) + ";quantile=" + kQuantileRule + ";scale=" + scale_description(test) +
         ";engine=" + kEngineVersion;
}

double order_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ConfigError("quantile of an empty sample");
  const auto r = static_cast<double>(sorted.size());
  // The small offset keeps products like 0.95 * 20000 from rounding up a whole index.
  auto k = static_cast<std::int64_t>(std::ceil(q * r - 1e-9));
  k = std::clamp<std::int64_t>(k, 1, static_cast<std::int64_t>(sorted.size()));
  return sorted[static_cast<std::size_t>(k - 1)];
}

std::uint64_t null_seed(std::uint64_t master) { return derive_seed(master, kNullTag); }
std::uint64_t power_seed(std::uint64_t master) { return derive_seed(master, kPowerTag); }

NullDistribution simulate_null(const SimulationConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = null_seed(config.seed);
  std::vector<Replicate> reps(static_cast<std::size_t>(config.replications));
  parallel_for(config.replications, config.threads, [&](std::int64_t i) {
    Stream rng(seed, static_cast<std::uint64_t>(i));
    reps[static_cast<std::size_t>(i)] =
        run_one(config.test, rng.normal_matrix(config.n, config.d), config.d, seed, i);
  });
  NullDistribution out;
  out.config = config;
  out.sorted.reserve(reps.size());
  for (const Replicate& r : reps) {
    out.sorted.push_back(r.scaled);
    if (!r.converged) ++out.nonconverged;
  }
  std::sort(out.sorted.begin(), out.sorted.end());
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CriticalValueRecord critical_value(const NullDistribution& null) {
  CriticalValueRecord rec;
  rec.config = null.config;
  const double a = null.config.alpha;
  rec.table_quantile = order_quantile(null.sorted, 1.0 - a);
  if (is_two_sided(null.config.test)) {
    rec.lower = order_quantile(null.sorted, 0.5 * a);
    rec.upper = order_quantile(null.sorted, 1.0 - 0.5 * a);
  } else {
    rec.upper = rec.table_quantile;
  }
  rec.scale = scale_description(null.config.test);
  rec.engine_version = kEngineVersion;
  rec.nonconverged = null.nonconverged;
  rec.wall_seconds = null.wall_seconds;
  return rec;
}

CriticalValueRecord critical_value(const SimulationConfig& config) { return critical_value(simulate_null(config)); }

PowerResult empirical_power(const TestSpec& test, const AlternativeSpec& alt, Index n,
                            const CriticalValueRecord& crit, std::int64_t replications,
                            std::uint64_t seed, int threads) {
  if (crit.config.test.id() != test.id() || crit.config.n != n) {
    throw ConfigError("critical value was simulated for " + crit.config.test.id() + " at n = " +
                      std::to_string(crit.config.n) + ", not " + test.id() + " at n = " + std::to_string(n));
  }
  if (replications < 1) throw ConfigError("need at least one replication");
  const Index d = crit.config.d;
  alt.validate(d);
  const std::uint64_t s = power_seed(seed);
  std::vector<Replicate> reps(static_cast<std::size_t>(replications));
  parallel_for(replications, threads, [&](std::int64_t i) {
    Stream rng(s, static_cast<std::uint64_t>(i));
    reps[static_cast<std::size_t>(i)] = run_one(test, draw_alternative(alt, d, n, rng), d, s, i);
  });
  PowerResult out;
  out.replications = replications;
  for (const Replicate& r : reps) {
    if (crit.rejects(r.scaled)) ++out.rejections;
    if (!r.converged) ++out.nonconverged;
  }
  out.rate = static_cast<double>(out.rejections) / static_cast<double>(replications);
  return out;
}

double mc_pvalue(const NullDistribution& null, double observed_scaled) {
  const auto& v = null.sorted;
  const auto r = static_cast<double>(v.size());
  const auto at_least = static_cast<double>(v.end() - std::lower_bound(v.begin(), v.end(), observed_scaled));
  const double upper = (1.0 + at_least) / (r + 1.0);
  if (!is_two_sided(null.config.test)) return upper;
  const auto at_most = static_cast<double>(std::upper_bound(v.begin(), v.end(), observed_scaled) - v.begin());
  const double lower = (1.0 + at_most) / (r + 1.0);
  return std::min(1.0, 2.0 * std::min(upper, lower));
}

PValueResult mc_pvalue(const TestSpec& test, const Sample& sample, std::int64_t replications,
                       std::uint64_t seed, int threads) {
  SimulationConfig cfg;
  cfg.test = test;
  cfg.d = sample.d();
  cfg.n = sample.n();
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.threads = threads;
  const NullDistribution null = simulate_null(cfg);
  const StatisticValue v = evaluate(test, standardize(sample));
  PValueResult out;
  out.raw = v.raw;
  out.converged = v.converged;
  out.scaled = apply_scale(v.raw, test, cfg.d);
  out.p = mc_pvalue(null, out.scaled);
  return out;
}

}  // namespace mvn
