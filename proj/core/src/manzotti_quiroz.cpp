#include "mvn/manzotti_quiroz.hpp"

#include "mvn/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace mvn {

double chi_moment(Index d, int k) {
  const double dd = static_cast<double>(d);
  return std::pow(2.0, 0.5 * k) / boost::math::tgamma_delta_ratio(0.5 * dd, 0.5 * k);
}

MQPrecomp mq_build(Index d, MQVariant variant, std::uint64_t shuffle_seed) {
  MQPrecomp pre;
  pre.variant = variant;
  if (variant == MQVariant::f1) {
    pre.basis = build_sphere_basis(d, 4, shuffle_seed);
    for (Index i = 1; i <= pre.basis.count; ++i) {
      pre.radial_power.push_back(0);
      pre.harmonic.push_back(i);
    }
  } else {
    pre.basis = build_sphere_basis(d, 2, shuffle_seed);
    pre.radial_power.push_back(1);
    pre.harmonic.push_back(0);
    for (Index i = 0; i <= pre.basis.count; ++i) {
      pre.radial_power.push_back(3);
      pre.harmonic.push_back(i);
    }
  }
  const auto k = static_cast<Index>(pre.harmonic.size());
  // Inner products of the basis functions on the sphere, from the monomial moments.
  const auto m = static_cast<Index>(pre.basis.exponents.size());
  Matrix mono_gram(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      std::vector<int> sum = pre.basis.exponents[static_cast<std::size_t>(i)];
      for (Index c = 0; c < d; ++c) {
        sum[static_cast<std::size_t>(c)] += pre.basis.exponents[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
      }
      mono_gram(i, j) = mono_gram(j, i) = sphere_moment(sum);
    }
  }
  const Matrix g = pre.basis.coefficients.transpose() * mono_gram * pre.basis.coefficients;
  const Vector sphere_mean = pre.basis.coefficients.transpose() * mono_gram.col(0);

  pre.mean.resize(k);
  pre.v.resize(k, k);
  for (Index i = 0; i < k; ++i) {
    const auto hi = pre.harmonic[static_cast<std::size_t>(i)];
    const int pi = pre.radial_power[static_cast<std::size_t>(i)];
    pre.mean(i) = chi_moment(d, pi) * sphere_mean(hi);
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const auto hi = pre.harmonic[static_cast<std::size_t>(i)];
      const auto hj = pre.harmonic[static_cast<std::size_t>(j)];
      const int p = pre.radial_power[static_cast<std::size_t>(i)] + pre.radial_power[static_cast<std::size_t>(j)];
      pre.v(i, j) = chi_moment(d, p) * g(hi, hj) - pre.mean(i) * pre.mean(j);
    }
  }
  pre.v = 0.5 * (pre.v + pre.v.transpose());
  Eigen::LLT<Matrix> llt(pre.v);
  if (llt.info() != Eigen::Success) {
    throw ParameterError("Manzotti-Quiroz: covariance matrix is not positive definite for d = " +
                         std::to_string(d));
  }
  pre.v_inverse = llt.solve(Matrix::Identity(k, k));
  pre.v_inverse = 0.5 * (pre.v_inverse + pre.v_inverse.transpose());
  return pre;
}

std::shared_ptr<const MQPrecomp> mq_precompute(Index d, MQVariant variant) {
  static std::mutex mutex;
  static std::map<std::pair<Index, int>, std::shared_ptr<const MQPrecomp>> cache;
  const std::pair<Index, int> key{d, static_cast<int>(variant)};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_shared<const MQPrecomp>(mq_build(d, variant))).first;
  }
  return it->second;
}

double mq_statistic(const ScaledResiduals& y, const MQPrecomp& pre) {
  if (y.d() != pre.basis.d) {
    throw InputError("Manzotti-Quiroz: precomputation is for d = " + std::to_string(pre.basis.d) +
                     ", data has d = " + std::to_string(y.d()));
  }
  const Index n = y.n();
  const Vector r = y.rows().rowwise().norm();
  Matrix u = y.rows();
  for (Index j = 0; j < n; ++j) {
    if (r(j) > 0.0) u.row(j) /= r(j);
  }
  const Matrix g = pre.basis.evaluate(u);
  const Index k = pre.k();
  Vector nu = Vector::Zero(k);
  for (Index i = 0; i < k; ++i) {
    const int p = pre.radial_power[static_cast<std::size_t>(i)];
    const auto col = g.col(pre.harmonic[static_cast<std::size_t>(i)]);
    nu(i) = (p == 0 ? col.sum() : col.dot(r.array().pow(p).matrix())) - static_cast<double>(n) * pre.mean(i);
  }
  nu /= std::sqrt(static_cast<double>(n));
  return nu.dot(pre.v_inverse * nu);
}

double mq_statistic(const ScaledResiduals& y, MQVariant variant) {
  return mq_statistic(y, *mq_precompute(y.d(), variant));
}

}  // namespace mvn
