#pragma once

#include "mvn/sample.hpp"
#include "mvn/sphere_search.hpp"

namespace mvn {

/// Number of radii in the coarse radial grid of pudelko().
inline constexpr int kPudelkoRadii = 24;

/// |Psi_n(t) - exp(-|t|^2/2)| / |t|, extended by 0 at t = 0.
double pudelko_ratio(const ScaledResiduals& y, const Eigen::Ref<const Vector>& t);

/// PU_{n,r} = sqrt(n) sup_{0<|t|<=r} |Psi_n(t) - Psi_0(t)| / |t|. The supremum is
/// approximated by a radial grid times a set of directions, refined by simplex
/// search inside the ball. `direction` of the result holds the maximising t.
SphereMaximum pudelko(const ScaledResiduals& y, double r, const SphereSearchConfig& config = {});

}  // namespace mvn
