#include "mvn/energy.hpp"

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace mvn {

double expected_dist_to_normal(const Eigen::Ref<const Vector>& a) {
  const double d = static_cast<double>(a.size());
  const double lambda = 0.5 * a.squaredNorm();
  // Gamma((d+2k+1)/2) / Gamma((d+2k)/2) as a function of nu = (d+2k)/2.
  auto chi_ratio = [](double nu) { return 1.0 / boost::math::tgamma_delta_ratio(nu, 0.5); };
  if (lambda == 0.0) return std::numbers::sqrt2 * chi_ratio(0.5 * d);

  // Sum outward from the Poisson mode so no term under- or overflows.
  const double mode = std::floor(lambda);
  const double p0 = boost::math::pdf(boost::math::poisson_distribution<double>(lambda), mode);
  const double nu0 = 0.5 * d + mode;
  const double r0 = chi_ratio(nu0);
  double sum = p0 * r0;

  double p = p0;
  double r = r0;
  for (double k = mode;; k += 1.0) {
    const double nu = 0.5 * d + k;
    p *= lambda / (k + 1.0);
    r *= (nu + 0.5) / nu;
    const double term = p * r;
    sum += term;
    if (k > lambda && term <= 1e-17 * sum) break;
  }
  p = p0;
  r = r0;
  for (double k = mode; k > 0.0; k -= 1.0) {
    const double nu = 0.5 * d + k - 1.0;
    p *= k / lambda;
    r *= nu / (nu + 0.5);
    const double term = p * r;
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return std::numbers::sqrt2 * sum;
}

double expected_normal_distance(Index d) {
  return 2.0 / boost::math::tgamma_delta_ratio(0.5 * static_cast<double>(d), 0.5);
}

double energy(const ScaledResiduals& y) {
  const Index n = y.n();
  const double nd = static_cast<double>(n);
  const Matrix yt = std::sqrt(nd / (nd - 1.0)) * y.rows();
  double to_normal = 0.0;
  for (Index j = 0; j < n; ++j) to_normal += expected_dist_to_normal(yt.row(j).transpose());
  double within = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) within += (yt.row(j) - yt.row(k)).norm();
  }
  within *= 2.0;
  return nd * (2.0 / nd * to_normal - expected_normal_distance(y.d()) - within / (nd * nd));
}

}  // namespace mvn
