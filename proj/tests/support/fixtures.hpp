#pragma once

#include "mvn/random.hpp"
#include "mvn/sample.hpp"

#include <cmath>

namespace mvn::testing {

inline Matrix gaussian_matrix(Index n, Index d, std::uint64_t seed) {
  Stream rng(seed, 0);
  return rng.normal_matrix(n, d);
}

/// Skewed, heavy-ish data so that every statistic is away from its null centre.
inline Matrix skewed_matrix(Index n, Index d, std::uint64_t seed) {
  Stream rng(seed, 1);
  Matrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = rng.exponential() + 0.3 * rng.normal();
  }
  return x;
}

inline ScaledResiduals residuals(const Matrix& x) { return standardize(Sample(x)); }

inline Matrix random_orthogonal(Index d, std::uint64_t seed) {
  Stream rng(seed, 2);
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(d, d));
  return qr.householderQ() * Matrix::Identity(d, d);
}

/// Regular matrix with condition number at most 100.
inline Matrix random_regular(Index d, std::uint64_t seed) {
  Stream rng(seed, 3);
  const Matrix u = random_orthogonal(d, seed * 7 + 1);
  const Matrix v = random_orthogonal(d, seed * 7 + 2);
  Vector s(d);
  for (Index i = 0; i < d; ++i) s(i) = std::exp(rng.uniform() * std::log(100.0)) * (rng.uniform() < 0.5 ? -1 : 1);
  s(0) = s(0) > 0 ? 1.0 : -1.0;
  if (d > 1) s(d - 1) = 100.0;
  return u * s.asDiagonal() * v.transpose();
}

inline Matrix affine(const Matrix& x, const Matrix& a, const Vector& b) {
  return (x * a.transpose()).rowwise() + b.transpose();
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace mvn::testing
