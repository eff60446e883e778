#include "fixtures.hpp"
#include "grid_oracles.hpp"

#include "mvn/errors.hpp"
#include "mvn/moment_statistics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mvn;
using namespace mvn::testing;

namespace {

ScaledResiduals line_003() {
  Matrix x(3, 1);
  x << 0, 0, 3;
  return residuals(x);
}

ScaledResiduals axis_cross(Index d) {
  Matrix y = Matrix::Zero(2 * d, d);
  for (Index i = 0; i < d; ++i) {
    y(2 * i, i) = std::sqrt(static_cast<double>(d));
    y(2 * i + 1, i) = -std::sqrt(static_cast<double>(d));
  }
  return ScaledResiduals::from_standardized(y);
}

double brute_pair_sum(const ScaledResiduals& y, int power) {
  const Matrix& m = y.rows();
  double s = 0.0;
  for (Index j = 0; j < y.n(); ++j) {
    for (Index k = 0; k < y.n(); ++k) s += std::pow(m.row(j).dot(m.row(k)), power);
  }
  return s / static_cast<double>(y.n() * y.n());
}

}  // namespace

TEST(MardiaSkewness, AntipodalIsZero) { EXPECT_NEAR(mardia_skewness(axis_cross(2)), 0.0, 1e-15); }

TEST(MardiaSkewness, LineExample) { EXPECT_NEAR(mardia_skewness(line_003()), 0.5, 1e-12); }

TEST(MardiaSkewness, MatchesBruteForce) {
  const ScaledResiduals y = residuals(skewed_matrix(30, 3, 21));
  EXPECT_NEAR(mardia_skewness(y), brute_pair_sum(y, 3), 1e-10);
}

TEST(MardiaKurtosis, AxisCross) {
  for (Index d : {1, 2, 3, 5}) EXPECT_NEAR(mardia_kurtosis(axis_cross(d)), static_cast<double>(d * d), 1e-12);
}

TEST(MardiaKurtosis, LineExample) { EXPECT_NEAR(mardia_kurtosis(line_003()), 1.5, 1e-12); }

TEST(MardiaKurtosis, NullMeanNearDTimesDPlusTwo) {
  const Index d = 3;
  double mean = 0.0;
  constexpr int kReps = 400;
  for (int r = 0; r < kReps; ++r) mean += mardia_kurtosis(residuals(gaussian_matrix(2000, d, 100 + r))) / kReps;
  // Finite-sample mean is d(d+2)(n-1)/(n+1); sd of the average is about 0.02.
  EXPECT_NEAR(mean, d * (d + 2.0), 0.1);
}

TEST(MrsSkewness, AntipodalIsZero) { EXPECT_NEAR(mrs_skewness(axis_cross(3)), 0.0, 1e-15); }

TEST(MrsSkewness, LineExampleEqualsB1) { EXPECT_NEAR(mrs_skewness(line_003()), 0.5, 1e-12); }

TEST(MrsSkewness, SingleSumEqualsDoubleSum) {
  const ScaledResiduals y = residuals(skewed_matrix(25, 3, 4));
  const Matrix& m = y.rows();
  double s = 0.0;
  for (Index j = 0; j < y.n(); ++j) {
    for (Index k = 0; k < y.n(); ++k) s += m.row(j).squaredNorm() * m.row(k).squaredNorm() * m.row(j).dot(m.row(k));
  }
  EXPECT_NEAR(mrs_skewness(y), s / (25.0 * 25.0), 1e-10);
}

TEST(KoziolKurtosis, LineExample) { EXPECT_NEAR(koziol_kurtosis(line_003()), 2.25, 1e-12); }

TEST(KoziolKurtosis, AxisCrossIsEight) { EXPECT_NEAR(koziol_kurtosis(axis_cross(2)), 8.0, 1e-12); }

TEST(KoziolKurtosis, MatchesBruteForce) {
  const ScaledResiduals y = residuals(skewed_matrix(30, 3, 8));
  EXPECT_NEAR(koziol_kurtosis(y), brute_pair_sum(y, 4), 1e-10);
  const ScaledResiduals z = residuals(skewed_matrix(20, 5, 9));
  EXPECT_NEAR(koziol_kurtosis(z), brute_pair_sum(z, 4), 1e-9);
}

TEST(MalkovichAfifi, LineExamples) {
  EXPECT_NEAR(malkovich_afifi_skewness(line_003()).value, 0.5, 1e-12);
  EXPECT_NEAR(malkovich_afifi_kurtosis(line_003()).value, 1.5, 1e-12);
}

TEST(MalkovichAfifi, AntipodalSkewnessZero) {
  EXPECT_NEAR(malkovich_afifi_skewness(axis_cross(3)).value, 0.0, 1e-15);
}

TEST(MalkovichAfifi, AxisCrossKurtosisAttainedAtAxes) {
  // (1/2d) * 2 * (sqrt d)^4 = d at u = e_i; mixed directions give less.
  for (Index d : {2, 3}) {
    const double dd = static_cast<double>(d);
    EXPECT_NEAR(malkovich_afifi_kurtosis(axis_cross(d)).value, dd, 1e-10);
  }
}

TEST(MalkovichAfifi, MatchesCircleGrid) {
  const ScaledResiduals y = residuals(skewed_matrix(15, 2, 31));
  const Matrix& m = y.rows();
  auto skew = [&](const Vector& u) {
    const double s3 = (m * u).array().cube().mean();
    return s3 * s3;
  };
  auto kurt = [&](const Vector& u) { return (m * u).array().pow(4).mean(); };
  EXPECT_NEAR(malkovich_afifi_skewness(y).value, circle_max(skew, 100000), 1e-6);
  EXPECT_NEAR(malkovich_afifi_kurtosis(y).value, circle_max(kurt, 100000), 1e-6);
}

TEST(CoxSmall, OneDimensionIsZero) { EXPECT_EQ(cox_small(line_003()).value, 0.0); }

TEST(CoxSmall, EtaIsEven) {
  const ScaledResiduals y = residuals(skewed_matrix(20, 3, 2));
  Stream rng(1, 0);
  for (int i = 0; i < 20; ++i) {
    const Vector b = rng.unit_vector(3);
    EXPECT_NEAR(cox_small_eta2(y, b), cox_small_eta2(y, -b), 1e-12);
  }
}

TEST(CoxSmall, MatchesCircleGrid) {
  const ScaledResiduals y = residuals(skewed_matrix(20, 2, 17));
  const double oracle = circle_max([&](const Vector& b) { return cox_small_eta2(y, b); }, 3600);
  EXPECT_NEAR(cox_small(y).value, oracle, 1e-6);
}

TEST(CoxSmall, DegenerateDirectionIsInvalid) {
  // Square corners: the projection on an axis is two-valued, so the denominator vanishes.
  Matrix x(4, 2);
  x << 1, 1, 1, -1, -1, 1, -1, -1;
  const ScaledResiduals y = residuals(x);
  EXPECT_TRUE(std::isnan(cox_small_eta2(y, Vector::Unit(2, 0))));
  EXPECT_FALSE(std::isnan(cox_small_eta2(y, Vector::Ones(2).normalized())));
  EXPECT_TRUE(std::isfinite(cox_small(y).value));
}

TEST(SphereStatistics, NotBelowAnyStart) {
  const ScaledResiduals y = residuals(skewed_matrix(25, 3, 12));
  const Matrix& m = y.rows();
  const double found = malkovich_afifi_kurtosis(y).value;
  for (Index i = 0; i < 3; ++i) {
    Vector e = Vector::Zero(3);
    e(i) = 1.0;
    EXPECT_GE(found, (m * e).array().pow(4).mean() - 1e-14);
  }
  for (Index j = 0; j < y.n(); ++j) {
    const Vector u = m.row(j).transpose().normalized();
    EXPECT_GE(found, (m * u).array().pow(4).mean() - 1e-14);
  }
}
