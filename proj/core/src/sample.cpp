#include "mvn/sample.hpp"

#include "mvn/errors.hpp"

#include <cmath>
#include <string>

namespace mvn {

namespace {

void require_finite(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        throw InputError("non-finite value at row " + std::to_string(i + 1) + ", column " +
                         std::to_string(j + 1));
      }
    }
  }
}

}  // namespace

Sample::Sample(Matrix data) : data_(std::move(data)) {
  if (data_.cols() < 1) throw InputError("sample needs at least one column");
  if (data_.rows() < 2) throw InputError("sample needs at least two observations");
  require_finite(data_);
}

ScaledResiduals ScaledResiduals::from_standardized(Matrix y) {
  if (y.cols() < 1 || y.rows() < 2) throw InputError("scaled residuals need n >= 2, d >= 1");
  require_finite(y);
  const double n = static_cast<double>(y.rows());
  const Vector mean = y.colwise().mean();
  for (Index c = 0; c < y.cols(); ++c) {
    const double scale = y.col(c).cwiseAbs().maxCoeff();
    if (std::abs(mean(c)) > 1e-10 * std::max(1.0, scale)) {
      throw InputError("scaled residuals are not centred");
    }
  }
  const Matrix cov = (y.transpose() * y) / n;
  const Matrix id = Matrix::Identity(y.cols(), y.cols());
  if ((cov - id).cwiseAbs().maxCoeff() > 1e-8) {
    throw InputError("scaled residuals do not have identity covariance");
  }
  return ScaledResiduals(std::move(y));
}

Moments sample_moments(const Sample& sample) {
  const Matrix& x = sample.data();
  const double n = static_cast<double>(x.rows());
  Moments m;
  m.mean = x.colwise().mean().transpose();
  const Matrix centred = x.rowwise() - m.mean.transpose();
  m.cov = (centred.transpose() * centred) / n;
  // Exact symmetry; the product above is symmetric only up to rounding.
  m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();
  return m;
}

SymmetricRoot inverse_sqrt(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw InputError("inverse_sqrt needs a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw InputError("eigendecomposition failed");
  const Vector& lambda = eig.eigenvalues();  // ascending
  const double largest = lambda(lambda.size() - 1);
  const double floor = kDegeneracyThreshold * std::max(largest, 0.0);
  if (!(largest > 0.0) || lambda(0) <= floor) throw SingularCovariance(lambda(0), largest);

  const Matrix& v = eig.eigenvectors();
  const Vector inv_root = lambda.cwiseSqrt().cwiseInverse();
  SymmetricRoot root;
  root.matrix = v * inv_root.asDiagonal() * v.transpose();
  root.matrix = 0.5 * (root.matrix + root.matrix.transpose()).eval();
  root.eigenvalue_floor = floor;
  return root;
}

ScaledResiduals standardize(const Sample& sample) {
  if (sample.n() < sample.d() + 1) {
    throw InputError("standardisation needs n >= d+1 (n=" + std::to_string(sample.n()) +
                     ", d=" + std::to_string(sample.d()) + ")");
  }
  const Moments m = sample_moments(sample);
  const SymmetricRoot root = inverse_sqrt(m.cov);
  Matrix y = (sample.data().rowwise() - m.mean.transpose()) * root.matrix;
  return ScaledResiduals(std::move(y));
}

Matrix standardize_weighted(const Matrix& x, const Vector& weights) {
  const Vector mean = x.transpose() * weights;
  const Matrix centred = x.rowwise() - mean.transpose();
  Matrix cov = centred.transpose() * weights.asDiagonal() * centred;
  cov = 0.5 * (cov + cov.transpose()).eval();
  const SymmetricRoot root = inverse_sqrt(cov);
  return centred * root.matrix;
}

}  // namespace mvn
