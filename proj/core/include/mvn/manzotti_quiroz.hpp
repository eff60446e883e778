#pragma once

#include "mvn/sample.hpp"
#include "mvn/sphere_basis.hpp"

#include <memory>
#include <vector>

namespace mvn {

enum class MQVariant {
  f1,  ///< g(u) for the non-constant harmonics up to degree 4
  f2,  ///< |x| and |x|^3 g(u) for the harmonics up to degree 2, constant included
};

/// Everything the Manzotti-Quiroz statistic needs for one (d, variant).
/// Function i is |x|^radial_power[i] * g_{harmonic[i]}(x/|x|), with g_0 = 1.
struct MQPrecomp {
  MQVariant variant = MQVariant::f1;
  SpherePolyBasis basis;
  std::vector<int> radial_power;
  std::vector<Index> harmonic;
  Vector mean;  ///< E f_i(X), X ~ N_d(0, I)
  Matrix v;     ///< covariance matrix of f(X)
  Matrix v_inverse;

  Index k() const noexcept { return mean.size(); }
};

/// E|X|^k for X ~ N_d(0, I).
double chi_moment(Index d, int k);

/// Builds the precomputation; `shuffle_seed` is forwarded to build_sphere_basis.
MQPrecomp mq_build(Index d, MQVariant variant, std::uint64_t shuffle_seed = 0);

/// Cached, shareable precomputation for (d, variant). Thread-safe.
std::shared_ptr<const MQPrecomp> mq_precompute(Index d, MQVariant variant);

/// T_{n,MQ}(f) = nu_n(f)' V^{-1} nu_n(f).
double mq_statistic(const ScaledResiduals& y, const MQPrecomp& pre);

/// Convenience overload using the cached precomputation.
double mq_statistic(const ScaledResiduals& y, MQVariant variant);

}  // namespace mvn
