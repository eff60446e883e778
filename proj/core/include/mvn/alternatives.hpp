#pragma once

#include "mvn/random.hpp"
#include "mvn/sample.hpp"

#include <string>
#include <string_view>

namespace mvn {

/// A univariate law, text form e.g. "beta(1,2)", "chisq(5)", "lnorm(0,0.5)".
struct UnivariateDist {
  enum class Kind { uniform, exponential, lognormal, beta, chisq, student_t, gamma, pearson2, pearson7 };
  Kind kind = Kind::uniform;
  double a = 0.0;  ///< first parameter (lower bound, rate, meanlog, shape1, dof, shape, a, m)
  double b = 1.0;  ///< second parameter where the law has one (upper bound, sdlog, shape2, rate)

  double draw(Stream& rng) const;
  std::string encode() const;
};

/// One of the alternative families of the comparative power study, plus the
/// standard normal and the shifted, correlated normal used as a null check.
struct AlternativeSpec {
  enum class Family {
    normal,          ///< N_d(0, I)
    normal_mixture,  ///< (1-p) N(0, I) + p N(mu 1, Sigma), Sigma = I or B_d (0.9 off-diagonal)
    student_t,       ///< N(0, I) / sqrt(chi2_nu / nu)
    iid_marginal,    ///< independent coordinates from `dist`
    spherical,       ///< R U, R from `dist`, U uniform on the sphere
    marginal_replace,  ///< N(0, I) with the last coordinate replaced by a draw from `dist`
    nm_theta,        ///< 0.5 N(0, Sigma_theta) + 0.5 N(0, Sigma_-theta)
    signed_abs_normal,  ///< s |Z|, one random sign per observation
    null_reference,  ///< N(mu_d, Sigma_0.5) with mu_d = (1, ..., d)
  };
  Family family = Family::normal;
  double p = 0.5;
  double mu = 3.0;
  bool sigma_b = false;  ///< normal mixture: B_d instead of I
  double nu = 3.0;
  double theta = 0.2;
  UnivariateDist dist;

  /// Canonical text form, e.g. "nmix:p=0.5,mu=3,sigma=I" or "mar:dist=chisq(3)".
  std::string encode() const;
  /// Throws ParameterError if a parameter is outside its domain for dimension d.
  void validate(Index d) const;
};

/// Inverse of AlternativeSpec::encode; throws ConfigError on malformed text.
AlternativeSpec parse_alternative(std::string_view text);
UnivariateDist parse_univariate(std::string_view text);

/// n independent rows from the alternative, drawn in row order from `rng`.
Matrix draw_alternative(const AlternativeSpec& spec, Index d, Index n, Stream& rng);

/// Validated Sample wrapper around draw_alternative.
Sample sample_alternative(const AlternativeSpec& spec, Index d, Index n, Stream& rng);

/// Draws from N_d(mu_d, Sigma_0.5).
Sample null_reference(Index d, Index n, Stream& rng);

/// Equicorrelation matrix: ones on the diagonal, rho elsewhere.
Matrix equicorrelation(Index d, double rho);

}  // namespace mvn
