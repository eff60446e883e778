#pragma once

#include "mvn/sample.hpp"

namespace mvn {

// Weighted L2 distances between empirical and Gaussian transforms of the scaled
// residuals, evaluated through closed-form pairwise sums.
//
// Each statistic has a uniform-weight entry point and a `_weighted` form taking
// row weights w (nonnegative, summing to one) and a nominal sample size n. The
// weighted form equals the uniform one applied to the sample in which row j is
// repeated n*w_j times; resampling code uses it to collapse duplicate rows.

/// Default guard on the number of distinct rows accepted by hjm().
inline constexpr Index kHjmDefaultMaxRows = 200;

struct HjmOptions {
  Index max_rows = kHjmDefaultMaxRows;  ///< larger inputs throw ConfigError
  bool allow_large = false;             ///< disables the max_rows guard
};

/// BHEP_{n,beta}; beta > 0.
double bhep(const ScaledResiduals& y, double beta);
/// Henze-Zirkler: BHEP with the bandwidth hz_beta(n, d).
double hz(const ScaledResiduals& y);
double hz_beta(Index n, Index d);
/// HJ_{n,gamma} (moment generating function analogue of BHEP); gamma > 1.
double hj(const ScaledResiduals& y, double gamma);
/// HJM_{n,gamma} based on the product of empirical cosine transform and MGF; gamma > 1.
double hjm(const ScaledResiduals& y, double gamma, const HjmOptions& options = {});
/// HV_{n,gamma} based on the gradient equation of the MGF; gamma > 2.
double hv(const ScaledResiduals& y, double gamma);
/// DEH_{n,gamma} (harmonic oscillator); gamma > 0.
double deh(const ScaledResiduals& y, double gamma);
/// DEH*_{n,gamma} (both functions in the oscillator equation estimated); gamma > 0.
double deh_star(const ScaledResiduals& y, double gamma);

double bhep_weighted(const Matrix& y, const Vector& w, double n, double beta);
double hj_weighted(const Matrix& y, const Vector& w, double n, double gamma);
double hjm_weighted(const Matrix& y, const Vector& w, double n, double gamma,
                    const HjmOptions& options = {});
double hv_weighted(const Matrix& y, const Vector& w, double n, double gamma);
double deh_weighted(const Matrix& y, const Vector& w, double n, double gamma);
double deh_star_weighted(const Matrix& y, const Vector& w, double n, double gamma);

}  // namespace mvn
