#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace mvn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// An n x d data matrix, rows are observations. Entries are finite and n >= 2.
class Sample {
 public:
  explicit Sample(Matrix data);

  const Matrix& data() const noexcept { return data_; }
  Index n() const noexcept { return data_.rows(); }
  Index d() const noexcept { return data_.cols(); }

 private:
  Matrix data_;
};

struct Moments {
  Vector mean;
  Matrix cov;  // 1/n normalisation
};

/// S_n^{-1/2}: the symmetric inverse square root of a covariance matrix.
struct SymmetricRoot {
  Matrix matrix;
  double eigenvalue_floor = 0.0;  // threshold the smallest eigenvalue was checked against
};

/// Standardised rows Y_j = S_n^{-1/2}(X_j - mean). Column means are zero and the
/// (1/n) covariance is the identity.
class ScaledResiduals {
 public:
  /// Adopts rows that are already standardised; throws InputError if the mean or
  /// covariance invariant does not hold to within the stated tolerances.
  static ScaledResiduals from_standardized(Matrix y);

  const Matrix& rows() const noexcept { return y_; }
  Index n() const noexcept { return y_.rows(); }
  Index d() const noexcept { return y_.cols(); }
  auto row(Index j) const { return y_.row(j); }

 private:
  explicit ScaledResiduals(Matrix y) : y_(std::move(y)) {}
  friend ScaledResiduals standardize(const Sample& sample);

  Matrix y_;
};

/// Relative eigenvalue threshold below which a covariance is treated as singular.
inline constexpr double kDegeneracyThreshold = 1e-10;

Moments sample_moments(const Sample& sample);

/// Throws SingularCovariance when the smallest eigenvalue is below
/// kDegeneracyThreshold times the largest one.
SymmetricRoot inverse_sqrt(const Matrix& cov);

ScaledResiduals standardize(const Sample& sample);

/// Weighted counterpart used by resampling code: `weights` are nonnegative and sum
/// to one; the returned rows are standardised under the weighted empirical law.
Matrix standardize_weighted(const Matrix& x, const Vector& weights);

}  // namespace mvn
