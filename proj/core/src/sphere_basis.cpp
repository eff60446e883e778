#include "mvn/sphere_basis.hpp"

#include "mvn/errors.hpp"
#include "mvn/random.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mvn {
namespace {

constexpr double kMinEigenvalue = 1e-9;

double pochhammer(double x, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= x + i;
  return p;
}

// All multi-indices of total degree `deg` in d variables, lexicographically descending.
void multi_indices(Index d, int deg, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  std::function<void(Index, int)> rec = [&](Index pos, int left) {
    if (pos == d - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[static_cast<std::size_t>(pos)] = e;
      rec(pos + 1, left - e);
    }
  };
  rec(0, deg);
}

}  // namespace

double sphere_moment(const std::vector<int>& alpha) {
  int half_total = 0;
  double num = 1.0;
  for (int a : alpha) {
    if (a % 2 != 0) return 0.0;
    num *= pochhammer(0.5, a / 2);
    half_total += a / 2;
  }
  return num / pochhammer(0.5 * static_cast<double>(alpha.size()), half_total);
}

Index harmonic_dimension(Index d, int j) {
  auto choose = [](Index n, int k) -> double {
    if (k < 0 || n < 0 || k > n) return 0.0;
    return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(k));
  };
  return static_cast<Index>(std::llround(choose(d + j - 1, j) - choose(d + j - 3, j - 2)));
}

Matrix SpherePolyBasis::monomials(const Matrix& u) const {
  const Index rows = u.rows();
  const auto m = static_cast<Index>(exponents.size());
  // Powers u_i^e for e = 0..max_degree.
  std::vector<Matrix> powers(static_cast<std::size_t>(max_degree + 1), Matrix::Ones(rows, d));
  for (int e = 1; e <= max_degree; ++e) {
    powers[static_cast<std::size_t>(e)] = powers[static_cast<std::size_t>(e - 1)].cwiseProduct(u);
  }
  Matrix out(rows, m);
  for (Index c = 0; c < m; ++c) {
    const auto& alpha = exponents[static_cast<std::size_t>(c)];
    Vector col = Vector::Ones(rows);
    for (Index i = 0; i < d; ++i) {
      const int e = alpha[static_cast<std::size_t>(i)];
      if (e > 0) col = col.cwiseProduct(powers[static_cast<std::size_t>(e)].col(i));
    }
    out.col(c) = col;
  }
  return out;
}

SpherePolyBasis build_sphere_basis(Index d, int max_degree, std::uint64_t shuffle_seed) {
  if (d < 2) throw ParameterError("sphere basis needs d >= 2, got " + std::to_string(d));
  if (max_degree < 1) throw ParameterError("sphere basis needs max_degree >= 1");

  SpherePolyBasis basis;
  basis.d = d;
  basis.max_degree = max_degree;
  std::vector<int> mono_degree;
  Stream rng(shuffle_seed, 0x62617369ull);
  for (int deg = 0; deg <= max_degree; ++deg) {
    std::vector<std::vector<int>> block;
    multi_indices(d, deg, block);
    if (shuffle_seed != 0) {
      for (std::size_t i = block.size(); i > 1; --i) std::swap(block[i - 1], block[rng.below(i)]);
    }
    for (auto& a : block) {
      basis.exponents.push_back(std::move(a));
      mono_degree.push_back(deg);
    }
  }
  const auto m = static_cast<Index>(basis.exponents.size());
  Matrix gram(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      std::vector<int> sum = basis.exponents[static_cast<std::size_t>(i)];
      for (Index k = 0; k < d; ++k) sum[static_cast<std::size_t>(k)] += basis.exponents[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      gram(i, j) = gram(j, i) = sphere_moment(sum);
    }
  }

  // Per degree: project the new monomials off the lower-degree basis (twice), then
  // keep the dim H_deg leading eigendirections of the residual Gram matrix. Picking
  // the rank from the harmonic dimension avoids a tolerance on norms that are only
  // resolved to sqrt(epsilon).
  std::vector<Vector> kept;
  Index start = 0;
  for (int deg = 0; deg <= max_degree; ++deg) {
    Index stop = start;
    while (stop < m && mono_degree[static_cast<std::size_t>(stop)] == deg) ++stop;
    Matrix r = Matrix::Identity(m, m).middleCols(start, stop - start);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : kept) r -= q * (q.transpose() * gram * r);
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(r.transpose() * gram * r);
    const Index need = harmonic_dimension(d, deg);
    const Index b = stop - start;
    for (Index i = 0; i < need; ++i) {
      const Index col = b - 1 - i;
      const double lambda = eig.eigenvalues()(col);
      if (!(lambda > kMinEigenvalue)) throw std::logic_error("sphere basis lost rank at degree " + std::to_string(deg));
      Vector v = r * eig.eigenvectors().col(col) / std::sqrt(lambda);
      for (const Vector& q : kept) v -= q.dot(gram * v) * q;
      kept.push_back(v / std::sqrt(v.dot(gram * v)));
      basis.degree.push_back(deg);
    }
    start = stop;
  }
  basis.coefficients.resize(m, static_cast<Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) basis.coefficients.col(static_cast<Index>(i)) = kept[i];
  basis.count = static_cast<Index>(kept.size()) - 1;
  return basis;
}

}  // namespace mvn
