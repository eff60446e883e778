#pragma once

#include "mvn/sample.hpp"
#include "mvn/sphere_search.hpp"

namespace mvn {

/// Mardia skewness b_{n,d}^{(1)} = n^{-2} sum_{j,k} (Y_j'Y_k)^3.
double mardia_skewness(const ScaledResiduals& y);

/// Mardia kurtosis b_{n,d}^{(2)} = n^{-1} sum_j |Y_j|^4.
double mardia_kurtosis(const ScaledResiduals& y);

/// Mori-Rohatgi-Szekely skewness |n^{-1} sum_j |Y_j|^2 Y_j|^2.
double mrs_skewness(const ScaledResiduals& y);

/// Koziol kurtosis n^{-2} sum_{j,k} (Y_j'Y_k)^4.
double koziol_kurtosis(const ScaledResiduals& y);

/// Malkovich-Afifi skewness: max over unit u of (n^{-1} sum_j (u'Y_j)^3)^2.
SphereMaximum malkovich_afifi_skewness(const ScaledResiduals& y, const SphereSearchConfig& config = {});

/// Malkovich-Afifi kurtosis: max over unit u of n^{-1} sum_j (u'Y_j)^4.
SphereMaximum malkovich_afifi_kurtosis(const ScaledResiduals& y, const SphereSearchConfig& config = {});

/// Cox-Small statistic: max over unit b of eta_n^2(b). For d = 1 the numerator
/// vanishes identically and the value is 0 by convention. Throws DegenerateObjective
/// when the denominator is below kCoxSmallDenominatorFloor in every direction tried.
SphereMaximum cox_small(const ScaledResiduals& y, const SphereSearchConfig& config = {});

/// eta_n^2(b) for a unit vector b; NaN when the denominator is not above the floor.
double cox_small_eta2(const ScaledResiduals& y, const Eigen::Ref<const Vector>& b);

inline constexpr double kCoxSmallDenominatorFloor = 1e-12;

}  // namespace mvn
