#pragma once

#include "mvn/sample.hpp"

namespace mvn {

/// E|a - N| for N ~ N_d(0, I), via the Poisson mixture of noncentral chi means.
double expected_dist_to_normal(const Eigen::Ref<const Vector>& a);

/// E|N1 - N2| for independent N1, N2 ~ N_d(0, I): 2 Gamma((d+1)/2) / Gamma(d/2).
double expected_normal_distance(Index d);

/// Energy statistic of the rescaled residuals sqrt(n/(n-1)) Y_j against N_d(0, I).
double energy(const ScaledResiduals& y);

}  // namespace mvn
