#include "mvn/moment_statistics.hpp"

#include "mvn/errors.hpp"

#include <cmath>
#include <limits>

namespace mvn {

double mardia_skewness(const ScaledResiduals& y) {
  // b1 equals the squared Frobenius norm of the third-moment tensor.
  const Matrix& m = y.rows();
  const Index d = y.d();
  double total = 0.0;
  for (Index a = 0; a < d; ++a) {
    for (Index b = a; b < d; ++b) {
      const Vector ab = m.col(a).cwiseProduct(m.col(b));
      for (Index c = b; c < d; ++c) {
        const double moment = ab.dot(m.col(c)) / static_cast<double>(y.n());
        // Number of distinct permutations of (a, b, c).
        const double mult = (a == b && b == c) ? 1.0 : (a == b || b == c) ? 3.0 : 6.0;
        total += mult * moment * moment;
      }
    }
  }
  return total;
}

double mardia_kurtosis(const ScaledResiduals& y) {
  return y.rows().rowwise().squaredNorm().array().square().mean();
}

double mrs_skewness(const ScaledResiduals& y) {
  const Vector r2 = y.rows().rowwise().squaredNorm();
  const Vector v = y.rows().transpose() * r2 / static_cast<double>(y.n());
  return v.squaredNorm();
}

double koziol_kurtosis(const ScaledResiduals& y) {
  const Matrix& m = y.rows();
  const Index d = y.d();
  const double n = static_cast<double>(y.n());
  double total = 0.0;
  for (Index a = 0; a < d; ++a) {
    for (Index b = a; b < d; ++b) {
      const Vector ab = m.col(a).cwiseProduct(m.col(b));
      for (Index c = b; c < d; ++c) {
        const Vector abc = ab.cwiseProduct(m.col(c));
        for (Index e = c; e < d; ++e) {
          const double moment = abc.dot(m.col(e)) / n;
          // 4! / prod(k_i!) from the run lengths of the sorted index multiset.
          const Index idx[4] = {a, b, c, e};
          double mult = 24.0;
          int run = 1;
          for (int i = 1; i <= 4; ++i) {
            if (i < 4 && idx[i] == idx[i - 1]) {
              ++run;
            } else {
              for (int f = 2; f <= run; ++f) mult /= f;
              run = 1;
            }
          }
          total += mult * moment * moment;
        }
      }
    }
  }
  return total;
}

SphereMaximum malkovich_afifi_skewness(const ScaledResiduals& y, const SphereSearchConfig& config) {
  const Matrix& m = y.rows();
  auto objective = [&](const Eigen::Ref<const Vector>& u) {
    const double s3 = (m * u).array().cube().mean();
    return s3 * s3;
  };
  return maximize_on_sphere(objective, y.d(), config, m);
}

SphereMaximum malkovich_afifi_kurtosis(const ScaledResiduals& y, const SphereSearchConfig& config) {
  const Matrix& m = y.rows();
  auto objective = [&](const Eigen::Ref<const Vector>& u) {
    return (m * u).array().square().square().mean();
  };
  return maximize_on_sphere(objective, y.d(), config, m);
}

double cox_small_eta2(const ScaledResiduals& y, const Eigen::Ref<const Vector>& b) {
  const Matrix& m = y.rows();
  const Eigen::ArrayXd p = (m * b).array();
  const Eigen::ArrayXd p2 = p.square();
  const double s3 = (p2 * p).mean();
  const double s4 = p2.square().mean();
  const Vector v = m.transpose() * p2.matrix() / static_cast<double>(y.n());
  const double denominator = s4 - 1.0 - s3 * s3;
  if (!(denominator > kCoxSmallDenominatorFloor)) return std::numeric_limits<double>::quiet_NaN();
  return (v.squaredNorm() - s3 * s3) / denominator;
}

SphereMaximum cox_small(const ScaledResiduals& y, const SphereSearchConfig& config) {
  if (y.d() == 1) {
    SphereMaximum zero;
    zero.value = 0.0;
    zero.direction = Vector::Ones(1);
    return zero;
  }
  auto objective = [&](const Eigen::Ref<const Vector>& b) { return cox_small_eta2(y, b); };
  SphereMaximum best = maximize_on_sphere(objective, y.d(), config, y.rows());
  if (std::isnan(best.value)) {
    throw DegenerateObjective("Cox-Small: denominator of eta^2 vanishes in every searched direction");
  }
  return best;
}

}  // namespace mvn
