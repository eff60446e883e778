#pragma once

#include "mvn/sample.hpp"

#include <cstdint>
#include <vector>

namespace mvn {

/// Orthonormal basis (uniform probability measure on S^{d-1}) of the polynomials
/// of degree <= max_degree restricted to the sphere. Column 0 of `coefficients`
/// is the constant function 1; the remaining `count` columns are graded by degree.
struct SpherePolyBasis {
  Index d = 0;
  int max_degree = 0;
  std::vector<std::vector<int>> exponents;  ///< one multi-index per monomial row
  Matrix coefficients;                      ///< monomials x (1 + count)
  std::vector<int> degree;                  ///< degree of each basis column
  Index count = 0;                          ///< number of non-constant functions

  /// Monomial values u^alpha for each row of `u` (rows are points on the sphere).
  Matrix monomials(const Matrix& u) const;
  /// Basis values, one row per point and one column per basis function.
  Matrix evaluate(const Matrix& u) const { return monomials(u) * coefficients; }
};

/// E prod u_i^{alpha_i} for u uniform on S^{d-1}.
double sphere_moment(const std::vector<int>& alpha);

/// Number of linearly independent spherical harmonics of degree j in dimension d.
Index harmonic_dimension(Index d, int j);

/// Orthonormalises monomials degree by degree, with exact sphere moments as inner
/// product; each degree adds harmonic_dimension(d, deg) functions. A nonzero
/// `shuffle_seed` permutes the monomials within each degree first; the spanned
/// subspaces are the same for every seed. Requires d >= 2 and max_degree >= 1.
SpherePolyBasis build_sphere_basis(Index d, int max_degree, std::uint64_t shuffle_seed = 0);

}  // namespace mvn
