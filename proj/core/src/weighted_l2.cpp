#include "mvn/weighted_l2.hpp"

#include "mvn/errors.hpp"
#include "mvn/weighted_l2_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mvn {
namespace {

using Array = Eigen::ArrayXXd;

using kernels::kExpShiftThreshold;

void require_gamma(const char* name, double gamma, double lower) {
  if (!std::isfinite(gamma) || !(gamma > lower)) {
    throw ParameterError(std::string(name) + ": gamma must be finite and greater than " +
                         std::to_string(lower) + ", got " + std::to_string(gamma));
  }
}

void require_weights(const Matrix& y, const Vector& w, double n) {
  if (w.size() != y.rows() || y.rows() == 0) throw InputError("weight vector does not match rows");
  if (!(n > 0.0)) throw InputError("nominal sample size must be positive");
}

struct Pairwise {
  Array gram;   // Y_j'Y_k
  Vector norm2; // |Y_j|^2
};

Pairwise pairwise(const Matrix& y) {
  Pairwise p;
  p.gram = (y * y.transpose()).array();
  p.norm2 = p.gram.matrix().diagonal();
  return p;
}

// |Y_j + Y_k|^2 built from the Gram matrix.
Array sum2(const Pairwise& p) {
  const Index m = p.norm2.size();
  Array r = p.norm2.replicate(1, m).array();
  return (r + r.transpose() + 2.0 * p.gram).max(0.0);
}

double quad(const Vector& w, const Array& a) { return w.dot(a.matrix() * w); }

double half_d(const Matrix& y) { return 0.5 * static_cast<double>(y.cols()); }

}  // namespace

double bhep_weighted(const Matrix& y, const Vector& w, double n, double beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw ParameterError("BHEP: beta must be positive, got " + std::to_string(beta));
  }
  require_weights(y, w, n);
  return kernels::bhep<double>(y, w, n, beta);
}

double hz_beta(Index n, Index d) {
  const double dd = static_cast<double>(d);
  return std::pow((2.0 * dd + 1.0) * static_cast<double>(n) / 4.0, 1.0 / (dd + 4.0)) /
         std::numbers::sqrt2;
}

double hj_weighted(const Matrix& y, const Vector& w, double n, double gamma) {
  require_gamma("HJ", gamma, 1.0);
  require_weights(y, w, n);
  return kernels::hj<double>(y, w, n, gamma);
}

double hjm_weighted(const Matrix& y, const Vector& w, double n, double gamma, const HjmOptions& options) {
  require_gamma("HJM", gamma, 1.0);
  require_weights(y, w, n);
  const Index m = y.rows();
  if (!options.allow_large && m > options.max_rows) {
    throw ConfigError("HJM: " + std::to_string(m) + " rows exceed the guard of " +
                      std::to_string(options.max_rows) + "; the cost grows like n^4, opt in explicitly");
  }
  const double pi = std::numbers::pi;
  const double c = std::pow(pi / gamma, half_d(y));
  const Pairwise p = pairwise(y);
  const Array angle = p.gram / (2.0 * gamma);
  const Array cosg = angle.cos();
  const Array sing = angle.sin();

  // Sum over (k, m) of w_k w_m exp(|Y_k+Y_m|^2/(4g)) cos(a'(Y_k+Y_m)/(2g)) equals
  // c_a' H c_a - s_a' H s_a with c_a, s_a the cosines and sines of a'Y_k/(2g).
  const Array pexp = sum2(p) / (4.0 * gamma);
  const double top = pexp.maxCoeff();
  const double shift = top > kExpShiftThreshold ? top : 0.0;
  const Matrix hmat = (w * w.transpose()).array() * (pexp - shift).exp();

  constexpr Index kBlock = 256;
  Matrix cblock(kBlock, m);
  Matrix sblock(kBlock, m);
  Vector alpha(kBlock);
  double quartic = 0.0;
  Index filled = 0;
  auto flush = [&]() {
    if (filled == 0) return;
    const auto cb = cblock.topRows(filled);
    const auto sb = sblock.topRows(filled);
    const Matrix hc = cb * hmat;
    const Matrix hs = sb * hmat;
    const Vector forms = hc.cwiseProduct(cb).rowwise().sum() - hs.cwiseProduct(sb).rowwise().sum();
    quartic += alpha.head(filled).dot(forms);
    filled = 0;
  };
  for (Index j = 0; j < m; ++j) {
    for (Index l = j; l < m; ++l) {
      const double mult = j == l ? 0.5 : 1.0;  // half of cos(a-b)+cos(a+b), pairs counted twice
      for (int sign : {1, -1}) {
        const double a2 = std::max(0.0, p.norm2(j) + p.norm2(l) + 2.0 * sign * p.gram(j, l));
        alpha(filled) = w(j) * w(l) * mult * std::exp(-a2 / (4.0 * gamma));
        cblock.row(filled) = (cosg.row(j) * cosg.row(l) - sign * sing.row(j) * sing.row(l)).matrix();
        sblock.row(filled) = (sing.row(j) * cosg.row(l) + sign * cosg.row(j) * sing.row(l)).matrix();
        if (++filled == kBlock) flush();
      }
    }
  }
  flush();

  const Eigen::ArrayXd rk = p.norm2.array() / (4.0 * gamma);
  const Array cross = (rk.transpose().replicate(m, 1) - rk.replicate(1, m)).exp() * cosg;
  const double linear = -2.0 * quad(w, cross);
  return kernels::detail::times_exp<double>(n * c * (quartic + (linear + 1.0) * std::exp(-shift)), shift);
}

double hv_weighted(const Matrix& y, const Vector& w, double n, double gamma) {
  require_gamma("HV", gamma, 2.0);
  require_weights(y, w, n);
  return kernels::hv<double>(y, w, n, gamma);
}

double deh_weighted(const Matrix& y, const Vector& w, double n, double gamma) {
  require_gamma("DEH", gamma, 0.0);
  require_weights(y, w, n);
  return kernels::deh<double>(y, w, n, gamma);
}

double deh_star_weighted(const Matrix& y, const Vector& w, double n, double gamma) {
  require_gamma("DEH*", gamma, 0.0);
  require_weights(y, w, n);
  return kernels::deh_star<double>(y, w, n, gamma);
}

namespace {

Vector uniform_weights(Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

}  // namespace

double bhep(const ScaledResiduals& y, double beta) {
  return bhep_weighted(y.rows(), uniform_weights(y.n()), static_cast<double>(y.n()), beta);
}

double hz(const ScaledResiduals& y) { return bhep(y, hz_beta(y.n(), y.d())); }

double hj(const ScaledResiduals& y, double gamma) {
  return hj_weighted(y.rows(), uniform_weights(y.n()), static_cast<double>(y.n()), gamma);
}

double hjm(const ScaledResiduals& y, double gamma, const HjmOptions& options) {
  return hjm_weighted(y.rows(), uniform_weights(y.n()), static_cast<double>(y.n()), gamma, options);
}

double hv(const ScaledResiduals& y, double gamma) {
  return hv_weighted(y.rows(), uniform_weights(y.n()), static_cast<double>(y.n()), gamma);
}

double deh(const ScaledResiduals& y, double gamma) {
  return deh_weighted(y.rows(), uniform_weights(y.n()), static_cast<double>(y.n()), gamma);
}

double deh_star(const ScaledResiduals& y, double gamma) {
  return deh_star_weighted(y.rows(), uniform_weights(y.n()), static_cast<double>(y.n()), gamma);
}

}  // namespace mvn
