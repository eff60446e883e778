#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace mvn::kernels {

// Scalar-generic pairwise sums behind weighted_l2.hpp. The library instantiates
// them with double; any type with the usual <cmath> overloads (found by ADL) works,
// which lets boundary behaviour be studied in extended precision.
//
// Inputs are the scaled residual rows y (m x d), row weights w summing to one and
// the nominal sample size n. No parameter validation happens here.

template <class Real>
using MatrixT = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using VectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr double kExpShiftThreshold = 700.0;

namespace detail {

template <class Real>
Real pi_value() {
  using std::acos;
  return acos(Real(-1));
}

template <class Real>
struct PairGeometry {
  VectorT<Real> norm2;
  MatrixT<Real> gram;

  explicit PairGeometry(const MatrixT<Real>& y)
      : norm2(y.rowwise().squaredNorm()), gram(y * y.transpose()) {}

  Real minus2(Eigen::Index j, Eigen::Index k) const {
    const Real v = norm2(j) + norm2(k) - 2 * gram(j, k);
    return v > Real(0) ? v : Real(0);
  }
  Real plus2(Eigen::Index j, Eigen::Index k) const {
    const Real v = norm2(j) + norm2(k) + 2 * gram(j, k);
    return v > Real(0) ? v : Real(0);
  }
};

template <class Real>
void raise(Real& top, const Real& v) {
  if (v > top) top = v;
}

// x * exp(shift) without overflowing in exp(shift) alone.
template <class Real>
Real times_exp(const Real& x, const Real& shift) {
  using std::exp;
  using std::log;
  if (shift == Real(0) || x == Real(0)) return x;
  return x > Real(0) ? Real(exp(log(x) + shift)) : Real(-exp(log(-x) + shift));
}

// sum_{j,k} w_j w_k f(j, k) for symmetric f, visiting each unordered pair once.
template <class Real, class F>
Real symmetric_quad(const VectorT<Real>& w, F&& f) {
  const Eigen::Index m = w.size();
  Real diag(0);
  Real off(0);
  for (Eigen::Index j = 0; j < m; ++j) {
    diag += w(j) * w(j) * f(j, j);
    Real row(0);
    for (Eigen::Index k = j + 1; k < m; ++k) row += w(k) * f(j, k);
    off += w(j) * row;
  }
  return diag + 2 * off;
}

}  // namespace detail

template <class Real>
Real bhep(const MatrixT<Real>& y, const VectorT<Real>& w, const Real& n, const Real& beta) {
  using std::exp;
  using std::pow;
  const detail::PairGeometry<Real> g(y);
  const Real b2 = beta * beta;
  const Real h = Real(y.cols()) / 2;
  const Real pair =
      detail::symmetric_quad<Real>(w, [&](Eigen::Index j, Eigen::Index k) -> Real { return exp(-b2 / 2 * g.minus2(j, k)); });
  Real single(0);
  for (Eigen::Index j = 0; j < y.rows(); ++j) single += w(j) * exp(-b2 / (2 * (1 + b2)) * g.norm2(j));
  single *= pow(1 + b2, -h);
  return n * (pair - 2 * single + pow(1 + 2 * b2, -h));
}

template <class Real>
Real hj(const MatrixT<Real>& y, const VectorT<Real>& w, const Real& n, const Real& gamma) {
  using std::exp;
  using std::pow;
  const detail::PairGeometry<Real> g(y);
  const Real pi = detail::pi_value<Real>();
  const Real h = Real(y.cols()) / 2;
  const Eigen::Index m = y.rows();
  Real top(0);
  for (Eigen::Index j = 0; j < m; ++j) {
    detail::raise<Real>(top, g.norm2(j) / (4 * gamma - 2));
    for (Eigen::Index k = j; k < m; ++k) detail::raise<Real>(top, g.plus2(j, k) / (4 * gamma));
  }
  const Real shift = top > Real(kExpShiftThreshold) ? top : Real(0);
  const Real pair = pow(pi / gamma, h) * detail::symmetric_quad<Real>(w, [&](Eigen::Index j, Eigen::Index k) -> Real {
                      return exp(g.plus2(j, k) / (4 * gamma) - shift);
                    });
  Real single(0);
  for (Eigen::Index j = 0; j < m; ++j) single += w(j) * exp(g.norm2(j) / (4 * gamma - 2) - shift);
  single *= pow(pi / (gamma - Real(0.5)), h);
  const Real constant = pow(pi / (gamma - 1), h) * exp(-shift);
  return detail::times_exp<Real>(n * (pair - 2 * single + constant), shift);
}

template <class Real>
Real hv(const MatrixT<Real>& y, const VectorT<Real>& w, const Real& n, const Real& gamma) {
  using std::exp;
  using std::pow;
  const detail::PairGeometry<Real> g(y);
  const Real pi = detail::pi_value<Real>();
  const Real d(y.cols());
  const Eigen::Index m = y.rows();
  Real top(0);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = j; k < m; ++k) detail::raise<Real>(top, g.plus2(j, k) / (4 * gamma));
  }
  const Real shift = top > Real(kExpShiftThreshold) ? top : Real(0);
  const Real sum = detail::symmetric_quad<Real>(w, [&](Eigen::Index j, Eigen::Index k) -> Real {
    const Real plus = g.plus2(j, k);
    const Real poly = g.gram(j, k) - plus / (2 * gamma) + d / (2 * gamma) + plus / (4 * gamma * gamma);
    return exp(plus / (4 * gamma) - shift) * poly;
  });
  return detail::times_exp<Real>(n * pow(pi / gamma, d / 2) * sum, shift);
}

template <class Real>
Real deh(const MatrixT<Real>& y, const VectorT<Real>& w, const Real& n, const Real& gamma) {
  using std::exp;
  using std::pow;
  const detail::PairGeometry<Real> g(y);
  const Real pi = detail::pi_value<Real>();
  const Real d(y.cols());
  const Real h = d / 2;
  const Real pair = pow(pi / gamma, h) * detail::symmetric_quad<Real>(w, [&](Eigen::Index j, Eigen::Index k) -> Real {
                      return g.norm2(j) * g.norm2(k) * exp(-g.minus2(j, k) / (4 * gamma));
                    });
  const Real g21 = 2 * gamma + 1;
  Real single(0);
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    const Real r = g.norm2(j);
    single += w(j) * r * (r + 2 * d * gamma * g21) * exp(-r / (2 * g21));
  }
  single *= 2 * pow(2 * pi, h) / pow(g21, 2 + h);
  const Real constant =
      pow(pi, h) / pow(gamma + 1, 2 + h) * (gamma * (gamma + 1) * d * d + d * (d + 2) / 4);
  return n * (pair - single + constant);
}

template <class Real>
Real deh_star(const MatrixT<Real>& y, const VectorT<Real>& w, const Real& n, const Real& gamma) {
  using std::exp;
  using std::pow;
  const detail::PairGeometry<Real> g(y);
  const Real pi = detail::pi_value<Real>();
  const Real d(y.cols());
  const Real g2 = gamma * gamma;
  const Real a = 2 * gamma * d * (2 * gamma - 1);
  const Real b = 16 * d * d * g2 * gamma * (gamma - 1) + 4 * d * (d + 2) * g2;
  const Real e = 8 * d * g2 - 4 * (d + 2) * gamma;
  const Real sum = detail::symmetric_quad<Real>(w, [&](Eigen::Index j, Eigen::Index k) -> Real {
    const Real rj = g.norm2(j);
    const Real rk = g.norm2(k);
    const Real d2 = g.minus2(j, k);
    const Real ejk = exp(-d2 / (4 * gamma));
    return ejk * (rj * rk - (rj + rk) / (4 * g2) * (d2 + a) + (b + d2 * d2 + e * d2) / (16 * g2 * g2));
  });
  return n * pow(pi / gamma, d / 2) * sum;
}

}  // namespace mvn::kernels
