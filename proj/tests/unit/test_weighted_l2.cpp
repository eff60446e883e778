#include "boundary.hpp"
#include "fixtures.hpp"
#include "precise.hpp"
#include "quadrature.hpp"

#include "mvn/errors.hpp"
#include "mvn/weighted_l2.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

using namespace mvn;
using namespace mvn::testing;

namespace {

struct QuadCase {
  const char* name;
  double param;
  std::function<double(const ScaledResiduals&, double)> closed;
  std::function<double(const Matrix&, double)> integral;
};

std::vector<QuadCase> quad_cases() {
  return {
      {"bhep", 1.0, [](const ScaledResiduals& y, double p) { return bhep(y, p); }, bhep_integral},
      {"bhep_narrow", 0.5, [](const ScaledResiduals& y, double p) { return bhep(y, p); }, bhep_integral},
      {"hj", 1.5, [](const ScaledResiduals& y, double p) { return hj(y, p); }, hj_integral},
      {"hj_wide", 3.0, [](const ScaledResiduals& y, double p) { return hj(y, p); }, hj_integral},
      {"hjm", 1.5, [](const ScaledResiduals& y, double p) { return hjm(y, p); }, hjm_integral},
      {"hv", 5.0, [](const ScaledResiduals& y, double p) { return hv(y, p); }, hv_integral},
      {"deh", 0.25, [](const ScaledResiduals& y, double p) { return deh(y, p); }, deh_integral},
      {"deh_star", 0.5, [](const ScaledResiduals& y, double p) { return deh_star(y, p); }, deh_star_integral},
  };
}

double brute_hjm(const Matrix& y, double gamma) {
  const Index n = y.rows();
  const double c = std::pow(std::numbers::pi / gamma, 0.5 * static_cast<double>(y.cols()));
  auto kern = [&](const Vector& a, const Vector& b) {
    return std::exp((b.squaredNorm() - a.squaredNorm()) / (4.0 * gamma)) * std::cos(a.dot(b) / (2.0 * gamma));
  };
  double quartic = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index l = 0; l < n; ++l) {
      const Vector minus = (y.row(j) - y.row(l)).transpose();
      const Vector plus = (y.row(j) + y.row(l)).transpose();
      for (Index k = 0; k < n; ++k) {
        for (Index m = 0; m < n; ++m) {
          const Vector s = (y.row(k) + y.row(m)).transpose();
          quartic += 0.5 * (kern(minus, s) + kern(plus, s));
        }
      }
    }
  }
  double linear = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) linear += kern(y.row(j).transpose(), y.row(k).transpose());
  }
  const double nn = static_cast<double>(n);
  return c * (quartic / (nn * nn * nn) - 2.0 * linear / nn + nn);
}

}  // namespace

TEST(WeightedL2, BhepTwoPointExample) {
  const ScaledResiduals y = ScaledResiduals::from_standardized((Matrix(2, 1) << -1, 1).finished());
  const double expected =
      1.0 + std::exp(-2.0) - 2.0 * std::sqrt(2.0) * std::exp(-0.25) + 2.0 / std::sqrt(3.0);
  EXPECT_NEAR(bhep(y, 1.0), expected, 1e-14);
  EXPECT_NEAR(bhep(y, 1.0), 0.08725, 5e-6);
}

TEST(WeightedL2, HenzeZirklerBandwidth) {
  EXPECT_NEAR(hz_beta(20, 2), std::pow(25.0, 1.0 / 6.0) / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(hz_beta(20, 2), 1.2091, 5e-5);
  EXPECT_NEAR(hz_beta(50, 3), std::pow(87.5, 1.0 / 7.0) / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(hz_beta(50, 3), 1.3394, 5e-5);
  const ScaledResiduals y = residuals(skewed_matrix(20, 2, 4));
  EXPECT_EQ(hz(y), bhep(y, hz_beta(20, 2)));
}

TEST(WeightedL2, MatchesQuadratureOracle) {
  for (Index d : {1, 2}) {
    for (Index n : {3, 4, 6}) {
      const ScaledResiduals y = residuals(skewed_matrix(n, d, static_cast<std::uint64_t>(10 * d + n)));
      for (const QuadCase& c : quad_cases()) {
        const double closed = c.closed(y, c.param);
        const double oracle = c.integral(y.rows(), c.param);
        EXPECT_NEAR(closed, oracle, 1e-6 * std::abs(oracle))
            << c.name << " d=" << d << " n=" << n;
      }
    }
  }
}

TEST(WeightedL2, QuadratureSpotChecksAtTightTolerance) {
  const ScaledResiduals y4 = residuals(skewed_matrix(4, 1, 77));
  EXPECT_NEAR(hj(y4, 1.5), hj_integral(y4.rows(), 1.5), 1e-8 * hj(y4, 1.5));
  EXPECT_NEAR(hv(y4, 5.0), hv_integral(y4.rows(), 5.0), 1e-8 * hv(y4, 5.0));
  EXPECT_NEAR(deh(y4, 0.25), deh_integral(y4.rows(), 0.25), 1e-8 * deh(y4, 0.25));
  EXPECT_NEAR(deh_star(y4, 0.5), deh_star_integral(y4.rows(), 0.5), 1e-7 * deh_star(y4, 0.5));
  const ScaledResiduals y3 = residuals(skewed_matrix(3, 1, 78));
  EXPECT_NEAR(hjm(y3, 1.5), hjm_integral(y3.rows(), 1.5), 1e-7 * hjm(y3, 1.5));
  const ScaledResiduals y6 = residuals(skewed_matrix(6, 1, 79));
  EXPECT_NEAR(bhep(y6, 1.0), bhep_integral(y6.rows(), 1.0), 1e-8);
}

TEST(WeightedL2, HjmBlockedSumMatchesFourfoldSum) {
  for (Index d : {1, 2, 3}) {
    for (Index n : {5, 9, 17}) {
      const ScaledResiduals y = residuals(skewed_matrix(n, d, static_cast<std::uint64_t>(300 + n * d)));
      for (double gamma : {1.1, 1.5, 4.0}) {
        const double fast = hjm(y, gamma);
        EXPECT_NEAR(fast, brute_hjm(y.rows(), gamma), 1e-9 * std::max(1.0, fast))
            << "d=" << d << " n=" << n << " gamma=" << gamma;
      }
    }
  }
}

TEST(WeightedL2, HjmMatchesExtendedPrecisionFourfoldSum) {
  const Matrix x = skewed_matrix(7, 2, 505);
  const ScaledResiduals y = residuals(x);
  const PreciseMatrix yp = precise_residuals(x);
  const double precise = static_cast<double>(precise_hjm(yp, Precise(1.5)));
  EXPECT_NEAR(hjm(y, 1.5), precise, 1e-10 * precise);
}

TEST(WeightedL2, ExtendedPrecisionKernelsAgreeWithDouble) {
  const Matrix x = skewed_matrix(9, 3, 606);
  const ScaledResiduals y = residuals(x);
  const PreciseMatrix yp = precise_residuals(x);
  const PreciseVector w = precise_uniform(9);
  const Precise n(9);
  auto near = [](double a, const Precise& b) { EXPECT_NEAR(a, static_cast<double>(b), 1e-11 * std::abs(a)); };
  near(bhep(y, 1.0), kernels::bhep<Precise>(yp, w, n, Precise(1)));
  near(hj(y, 1.5), kernels::hj<Precise>(yp, w, n, Precise(1.5)));
  near(hv(y, 5.0), kernels::hv<Precise>(yp, w, n, Precise(5)));
  near(deh(y, 0.25), kernels::deh<Precise>(yp, w, n, Precise(0.25)));
  near(deh_star(y, 0.5), kernels::deh_star<Precise>(yp, w, n, Precise(0.5)));
}

TEST(WeightedL2, BoundaryLimitsConverge) {
  for (Boundary b : {Boundary::bhep_beta0, Boundary::bhep_beta_inf, Boundary::hj_gamma_inf_exact,
                     Boundary::hjm_gamma_inf, Boundary::deh_gamma0, Boundary::deh_gamma_inf,
                     Boundary::deh_star_gamma0, Boundary::deh_star_gamma_inf}) {
    for (Index d : {1, 2, 3}) {
      const Matrix x = boundary_dataset(d, 0, b == Boundary::hjm_gamma_inf ? 6 : 8);
      const Trend t = boundary_trend(b, x);
      EXPECT_TRUE(t.decreasing()) << t.name << " d=" << d;
      EXPECT_LT(t.final_error(), 1e-3) << t.name << " d=" << d;
    }
  }
}

TEST(WeightedL2, BhepSmallBetaAtOneHundredth) {
  const Matrix x = boundary_dataset(2, 1);
  const Trend t = boundary_trend(Boundary::bhep_beta0, x);
  ASSERT_EQ(t.params[2], 0.01);
  EXPECT_LT(t.errors[2], 1e-3);
}

TEST(WeightedL2, HjLargeGammaLimitUsesFactorEight) {
  // 6 HJ tends to three quarters of the skewness combination; 8 HJ tends to it.
  const Matrix x = boundary_dataset(2, 2);
  const Trend six = boundary_trend(Boundary::hj_gamma_inf, x);
  const Trend eight = boundary_trend(Boundary::hj_gamma_inf_exact, x);
  EXPECT_NEAR(six.final_error(), 0.25, 1e-3);
  EXPECT_LT(eight.final_error(), 1e-4);
}

TEST(WeightedL2, DehSmallGammaWithinTolerance) {
  const Matrix x = boundary_dataset(2, 3);
  const Trend t = boundary_trend(Boundary::deh_gamma0, x);
  ASSERT_EQ(t.params[1], 1e-4);
  EXPECT_LT(t.errors[1], 1e-3);
}

TEST(WeightedL2, NonnegativeAndFinite) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScaledResiduals y = residuals(seed % 2 ? gaussian_matrix(15, 3, seed) : skewed_matrix(15, 3, seed));
    for (double v : {bhep(y, 0.3), bhep(y, 3.0), hz(y), hj(y, 1.01), hj(y, 1.5), hjm(y, 1.5), hv(y, 2.01),
                     hv(y, 5.0), deh(y, 0.25), deh(y, 10.0), deh_star(y, 0.5), deh_star(y, 0.05)}) {
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GE(v, -1e-10);
    }
  }
}

TEST(WeightedL2, RotationInvariant) {
  const ScaledResiduals y = residuals(skewed_matrix(25, 3, 12));
  const Matrix q = random_orthogonal(3, 5);
  const ScaledResiduals r = ScaledResiduals::from_standardized(y.rows() * q);
  auto close = [](double a, double b) { EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(b))); };
  close(bhep(r, 1.0), bhep(y, 1.0));
  close(hj(r, 1.5), hj(y, 1.5));
  close(hjm(r, 1.5), hjm(y, 1.5));
  close(hv(r, 5.0), hv(y, 5.0));
  close(deh(r, 0.25), deh(y, 0.25));
  close(deh_star(r, 0.5), deh_star(y, 0.5));
}

TEST(WeightedL2, WeightedFormEqualsRepeatedRows) {
  const Matrix x = skewed_matrix(5, 2, 31);
  const std::vector<int> counts = {1, 3, 2, 1, 4};
  Matrix big(11, 2);
  Vector w(5);
  Index r = 0;
  for (Index j = 0; j < 5; ++j) {
    w(j) = counts[static_cast<std::size_t>(j)] / 11.0;
    for (int c = 0; c < counts[static_cast<std::size_t>(j)]; ++c) big.row(r++) = x.row(j);
  }
  const ScaledResiduals full = residuals(big);
  const Matrix yw = standardize_weighted(x, w);
  auto close = [](double a, double b) { EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b))); };
  close(bhep_weighted(yw, w, 11.0, 1.0), bhep(full, 1.0));
  close(hj_weighted(yw, w, 11.0, 1.5), hj(full, 1.5));
  close(hjm_weighted(yw, w, 11.0, 1.5), hjm(full, 1.5));
  close(hv_weighted(yw, w, 11.0, 5.0), hv(full, 5.0));
  close(deh_weighted(yw, w, 11.0, 0.25), deh(full, 0.25));
  close(deh_star_weighted(yw, w, 11.0, 0.5), deh_star(full, 0.5));
}

TEST(WeightedL2, LargeExponentsUseShiftedSums) {
  // One outlier among 712 rows: |2 Y_j|^2 / (4 gamma) exceeds the double exp range
  // while the statistic itself does not.
  const Index n = 712;
  Matrix y(n, 1);
  y.setConstant(-1.0);
  y(n - 1, 0) = static_cast<double>(n - 1);
  y *= 1.0 / std::sqrt(y.array().square().mean());
  const ScaledResiduals r = ScaledResiduals::from_standardized(y);
  const double gamma = 1.0005;
  const double top = y(n - 1, 0) * y(n - 1, 0) / gamma;  // |2 Y_n|^2 / (4 gamma)
  ASSERT_GT(top, std::log(std::numeric_limits<double>::max()));
  const double v = hj(r, gamma);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

TEST(WeightedL2, ParameterErrors) {
  const ScaledResiduals y = residuals(gaussian_matrix(10, 2, 1));
  EXPECT_THROW(bhep(y, 0.0), ParameterError);
  EXPECT_THROW(bhep(y, -1.0), ParameterError);
  EXPECT_THROW(hj(y, 1.0), ParameterError);
  EXPECT_THROW(hjm(y, 0.9), ParameterError);
  EXPECT_THROW(hv(y, 2.0), ParameterError);
  EXPECT_THROW(deh(y, 0.0), ParameterError);
  EXPECT_THROW(deh_star(y, -0.1), ParameterError);
  EXPECT_THROW(hj(y, std::nan("")), ParameterError);
}

TEST(WeightedL2, HjmGuardRequiresOptIn) {
  const ScaledResiduals y = residuals(gaussian_matrix(12, 2, 2));
  HjmOptions small;
  small.max_rows = 10;
  EXPECT_THROW(hjm(y, 1.5, small), ConfigError);
  small.allow_large = true;
  EXPECT_EQ(hjm(y, 1.5, small), hjm(y, 1.5));
}
