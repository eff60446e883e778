#include "fixtures.hpp"

#include "mvn/errors.hpp"
#include "mvn/montecarlo.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace mvn;
using namespace mvn::testing;

namespace {

SimulationConfig config(const char* test, Index d, Index n, std::int64_t r, std::uint64_t seed = 5) {
  SimulationConfig c;
  c.test = parse_test(test);
  c.d = d;
  c.n = n;
  c.replications = r;
  c.seed = seed;
  return c;
}

NullDistribution synthetic(const char* test, std::vector<double> values) {
  NullDistribution null;
  null.config = config(test, 2, 20, static_cast<std::int64_t>(values.size()));
  std::sort(values.begin(), values.end());
  null.sorted = std::move(values);
  return null;
}

std::vector<double> one_to(int r) {
  std::vector<double> v(static_cast<std::size_t>(r));
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

}  // namespace

TEST(OrderQuantile, CeilingIndex) {
  const auto v = one_to(20000);
  EXPECT_EQ(order_quantile(v, 0.95), 19000.0);
  EXPECT_EQ(order_quantile(v, 0.975), 19500.0);
  EXPECT_EQ(order_quantile(v, 0.025), 500.0);
  EXPECT_EQ(order_quantile(one_to(100), 0.95), 95.0);
  EXPECT_EQ(order_quantile(one_to(101), 0.95), 96.0);
  EXPECT_EQ(order_quantile(one_to(10), 0.0), 1.0);
  EXPECT_EQ(order_quantile(one_to(10), 1.0), 10.0);
  EXPECT_THROW(order_quantile({}, 0.5), ConfigError);
}

TEST(SimulationConfig, Validation) {
  EXPECT_NO_THROW(config("bhep", 2, 20, 100).validate());
  EXPECT_THROW(config("bhep", 2, 20, 99).validate(), ConfigError);
  EXPECT_THROW(config("bhep", 2, 2, 100).validate(), ConfigError);
  EXPECT_THROW(config("mq1", 1, 20, 100).validate(), ConfigError);
  auto c = config("bhep", 2, 20, 100);
  c.alpha = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(SimulationConfig, CanonicalIgnoresThreads) {
  auto a = config("hj", 2, 20, 1000);
  auto b = a;
  b.threads = 7;
  EXPECT_EQ(a.canonical(), b.canonical());
  b.seed = 6;
  EXPECT_NE(a.canonical(), b.canonical());
  EXPECT_NE(a.canonical().find("scale=pi^(-d/2)"), std::string::npos);
}

TEST(SimulateNull, SortedAndSized) {
  const NullDistribution null = simulate_null(config("bhep", 2, 20, 300));
  EXPECT_EQ(null.sorted.size(), 300u);
  EXPECT_TRUE(std::is_sorted(null.sorted.begin(), null.sorted.end()));
  EXPECT_GT(null.sorted.front(), 0.0);
}

TEST(SimulateNull, IdenticalAcrossThreadCounts) {
  for (const char* test : {"bhep", "ma-skew", "hj"}) {
    auto c = config(test, 2, 15, 200, 11);
    std::vector<std::vector<double>> runs;
    for (int threads : {1, 4, 16}) {
      c.threads = threads;
      runs.push_back(simulate_null(c).sorted);
    }
    EXPECT_EQ(runs[0], runs[1]) << test;
    EXPECT_EQ(runs[0], runs[2]) << test;
  }
}

TEST(SimulateNull, ReplicationUsesItsOwnStream) {
  const auto c = config("energy", 2, 12, 100, 3);
  const NullDistribution null = simulate_null(c);
  Stream rng(null_seed(3), 41);
  const double v = apply_scale(evaluate(c.test, standardize(Sample(rng.normal_matrix(12, 2)))).raw, c.test, 2);
  EXPECT_TRUE(std::binary_search(null.sorted.begin(), null.sorted.end(), v));
}

TEST(CriticalValue, OneAndTwoSided) {
  const auto one = critical_value(synthetic("bhep", one_to(1000)));
  EXPECT_EQ(one.upper, 950.0);
  EXPECT_EQ(one.table_quantile, 950.0);
  EXPECT_FALSE(one.lower.has_value());
  EXPECT_TRUE(one.rejects(950.5));
  EXPECT_FALSE(one.rejects(950.0));

  const auto two = critical_value(synthetic("mardia-kurt", one_to(1000)));
  EXPECT_EQ(two.upper, 975.0);
  EXPECT_EQ(*two.lower, 25.0);
  EXPECT_EQ(two.table_quantile, 950.0);
  EXPECT_TRUE(two.rejects(24.0));
  EXPECT_FALSE(two.rejects(25.0));
  EXPECT_TRUE(two.rejects(976.0));
  EXPECT_EQ(two.quantile_rule, kQuantileRule);
}

TEST(McPValue, Definition) {
  const auto null = synthetic("bhep", one_to(99));
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 95.0), 6.0 / 100.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 95.5), 5.0 / 100.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 1000.0), 1.0 / 100.0);
  double prev = 1.0;
  for (double x = 0.0; x < 110.0; x += 0.25) {
    const double p = mc_pvalue(null, x);
    EXPECT_LE(p, prev);
    EXPECT_GT(p, 0.0);
    prev = p;
  }
}

TEST(McPValue, TwoSidedDoublesSmallerTail) {
  const auto null = synthetic("mardia-kurt", one_to(99));
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 0.5), 2.0 / 100.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 200.0), 2.0 / 100.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 50.0), 1.0);
  EXPECT_DOUBLE_EQ(mc_pvalue(null, 3.0), 2.0 * 4.0 / 100.0);
}

TEST(McPValue, AtSimulatedQuantile) {
  const NullDistribution null = simulate_null(config("bhep", 2, 20, 2000));
  const double q = critical_value(null).upper;
  EXPECT_NEAR(mc_pvalue(null, q), 0.05, 0.002);
}

TEST(McPValue, UniformUnderNull) {
  const NullDistribution null = simulate_null(config("bhep", 2, 10, 999, 21));
  const TestSpec t = parse_test("bhep");
  constexpr int kTrials = 1000;
  std::vector<double> p;
  for (int i = 0; i < kTrials; ++i) {
    Stream rng(77, static_cast<std::uint64_t>(i));
    p.push_back(mc_pvalue(null, apply_scale(evaluate(t, standardize(Sample(rng.normal_matrix(10, 2)))).raw, t, 2)));
  }
  std::sort(p.begin(), p.end());
  double ks = 0.0;
  for (int i = 0; i < kTrials; ++i) {
    ks = std::max({ks, std::abs(p[static_cast<std::size_t>(i)] - static_cast<double>(i) / kTrials),
                   std::abs(p[static_cast<std::size_t>(i)] - static_cast<double>(i + 1) / kTrials)});
  }
  // Two null samples of sizes 999 and 1000 enter; 1.63 is the 1% point of sqrt(m) D,
  // widened for the finite reference distribution.
  EXPECT_LT(ks, 1.63 * std::sqrt(1.0 / kTrials + 1.0 / 999.0));
}

TEST(McPValue, SampleOverloadMatchesPieces) {
  Stream rng(8, 0);
  const Sample s(skewed_matrix(20, 2, 8));
  const TestSpec t = parse_test("hz");
  const PValueResult r = mc_pvalue(t, s, 500, 4);
  auto c = config("hz", 2, 20, 500, 4);
  const NullDistribution null = simulate_null(c);
  EXPECT_EQ(r.scaled, apply_scale(evaluate(t, standardize(s)).raw, t, 2));
  EXPECT_EQ(r.p, mc_pvalue(null, r.scaled));
  EXPECT_LT(r.p, 0.05);
}

TEST(EmpiricalPower, OwnNullGivesLevel) {
  const auto c = config("hz", 2, 20, 4000, 13);
  const CriticalValueRecord crit = critical_value(c);
  for (const char* alt : {"normal", "null-reference"}) {
    const PowerResult r = empirical_power(c.test, parse_alternative(alt), 20, crit, 4000, 14);
    EXPECT_EQ(r.replications, 4000);
    // Binomial error of both the rate and the simulated quantile.
    EXPECT_NEAR(r.rate, 0.05, 3.0 * std::sqrt(2.0 * 0.05 * 0.95 / 4000.0)) << alt;
  }
}

TEST(EmpiricalPower, DetectsMixture) {
  const auto c = config("bhep", 2, 100, 500, 13);
  const CriticalValueRecord crit = critical_value(c);
  const PowerResult r = empirical_power(c.test, parse_alternative("nmix:p=0.5,mu=3,sigma=I"), 100, crit, 200, 1);
  EXPECT_GT(r.rate, 0.9);
}

TEST(EmpiricalPower, TwoSidedRejectsBothTails) {
  const auto c = config("mardia-kurt", 2, 50, 1000, 13);
  const CriticalValueRecord crit = critical_value(c);
  // Short tails push b2 below its null range, heavy tails above it.
  const PowerResult light = empirical_power(c.test, parse_alternative("iid:dist=unif(0,1)"), 50, crit, 300, 1);
  const PowerResult heavy = empirical_power(c.test, parse_alternative("t:nu=3"), 50, crit, 300, 1);
  EXPECT_GT(light.rate, 0.3);
  EXPECT_GT(heavy.rate, 0.5);
}

TEST(EmpiricalPower, DeterministicAcrossThreads) {
  const auto c = config("cs", 2, 20, 200, 13);
  const CriticalValueRecord crit = critical_value(c);
  const auto alt = parse_alternative("t:nu=3");
  const auto a = empirical_power(c.test, alt, 20, crit, 200, 9, 1);
  const auto b = empirical_power(c.test, alt, 20, crit, 200, 9, 16);
  EXPECT_EQ(a.rejections, b.rejections);
}

TEST(EmpiricalPower, MismatchIsConfigError) {
  const auto c = config("bhep", 2, 20, 100);
  const CriticalValueRecord crit = critical_value(c);
  EXPECT_THROW(empirical_power(parse_test("hz"), parse_alternative("normal"), 20, crit, 10, 1), ConfigError);
  EXPECT_THROW(empirical_power(c.test, parse_alternative("normal"), 30, crit, 10, 1), ConfigError);
}

TEST(SimulateNull, MqNeedsTwoDimensions) {
  auto c = config("mq1", 2, 20, 100);
  c.d = 1;
  EXPECT_THROW(simulate_null(c), ConfigError);
}
