#include "mvn/alternatives.hpp"

#include "mvn/errors.hpp"
#include "mvn/test_spec.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace mvn {
namespace {

struct UniEntry {
  UnivariateDist::Kind kind;
  const char* name;
  int arity;
};

constexpr UniEntry kUni[] = {
    {UnivariateDist::Kind::uniform, "unif", 2},     {UnivariateDist::Kind::exponential, "exp", 1},
    {UnivariateDist::Kind::lognormal, "lnorm", 2},  {UnivariateDist::Kind::beta, "beta", 2},
    {UnivariateDist::Kind::chisq, "chisq", 1},      {UnivariateDist::Kind::student_t, "t", 1},
    {UnivariateDist::Kind::gamma, "gamma", 2},      {UnivariateDist::Kind::pearson2, "pearson2", 1},
    {UnivariateDist::Kind::pearson7, "pearson7", 1},
};

const UniEntry& uni_entry(UnivariateDist::Kind k) {
  for (const auto& e : kUni) {
    if (e.kind == k) return e;
  }
  throw ConfigError("unknown univariate law");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("cannot parse '" + std::string(s) + "' as a number in '" + std::string(context) + "'");
  }
  return v;
}

// Splits on commas outside parentheses.
std::vector<std::string_view> split_top(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

double UnivariateDist::draw(Stream& rng) const {
  switch (kind) {
    case Kind::uniform: return a + (b - a) * rng.uniform();
    case Kind::exponential: return rng.exponential() / a;
    case Kind::lognormal: return rng.lognormal(a, b);
    case Kind::beta: return rng.beta(a, b);
    case Kind::chisq: return rng.chi_squared(a);
    case Kind::student_t: return rng.student_t(a);
    case Kind::gamma: return rng.gamma(a) / b;
    case Kind::pearson2: return 2.0 * rng.beta(a, a) - 1.0;
    case Kind::pearson7: {
      const double dof = 2.0 * a - 1.0;
      return rng.student_t(dof) / std::sqrt(dof);
    }
  }
  return 0.0;
}

std::string UnivariateDist::encode() const {
  const UniEntry& e = uni_entry(kind);
  std::string out = std::string(e.name) + "(" + format_number(a);
  if (e.arity == 2) out += "," + format_number(b);
  return out + ")";
}

UnivariateDist parse_univariate(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ConfigError("law '" + std::string(text) + "' must look like name(args)");
  }
  const std::string_view name = trim(text.substr(0, open));
  const auto args = split_top(text.substr(open + 1, text.size() - open - 2));
  for (const auto& e : kUni) {
    if (name != e.name) continue;
    if (static_cast<int>(args.size()) != e.arity) {
      throw ConfigError("law '" + std::string(name) + "' takes " + std::to_string(e.arity) + " argument(s)");
    }
    UnivariateDist u;
    u.kind = e.kind;
    u.a = parse_number(args[0], text);
    u.b = e.arity == 2 ? parse_number(args[1], text) : 0.0;
    return u;
  }
  throw ConfigError("unknown law '" + std::string(name) + "'");
}

std::string AlternativeSpec::encode() const {
  switch (family) {
    case Family::normal: return "normal";
    case Family::normal_mixture:
      return "nmix:p=" + format_number(p) + ",mu=" + format_number(mu) + ",sigma=" + (sigma_b ? "B" : "I");
    case Family::student_t: return "t:nu=" + format_number(nu);
    case Family::iid_marginal: return "iid:dist=" + dist.encode();
    case Family::spherical: return "spherical:radial=" + dist.encode();
    case Family::marginal_replace: return "mar:dist=" + dist.encode();
    case Family::nm_theta: return "nm:theta=" + format_number(theta);
    case Family::signed_abs_normal: return "sabsnorm";
    case Family::null_reference: return "null-reference";
  }
  return "";
}

namespace {

void validate_dist(const UnivariateDist& u, bool positive_support) {
  using K = UnivariateDist::Kind;
  const std::string where = u.encode();
  auto finite = [&](double v) { return std::isfinite(v); };
  require(finite(u.a) && finite(u.b), where + ": parameters must be finite");
  switch (u.kind) {
    case K::uniform: require(u.a < u.b, where + ": need lower < upper"); break;
    case K::exponential: require(u.a > 0.0, where + ": rate must be positive"); break;
    case K::lognormal: require(u.b > 0.0, where + ": sdlog must be positive"); break;
    case K::beta: require(u.a > 0.0 && u.b > 0.0, where + ": shapes must be positive"); break;
    case K::chisq: require(u.a > 0.0, where + ": degrees of freedom must be positive"); break;
    case K::student_t: require(u.a > 0.0, where + ": degrees of freedom must be positive"); break;
    case K::gamma: require(u.a > 0.0 && u.b > 0.0, where + ": shape and rate must be positive"); break;
    case K::pearson2: require(u.a > 0.0, where + ": a must be positive"); break;
    case K::pearson7: require(u.a > 0.5, where + ": m must exceed 1/2"); break;
  }
  if (positive_support) {
    const bool ok = u.kind == K::exponential || u.kind == K::lognormal || u.kind == K::beta ||
                    u.kind == K::chisq || u.kind == K::gamma || (u.kind == K::uniform && u.a >= 0.0);
    require(ok, where + ": a radial law needs nonnegative support");
  }
}

}  // namespace

void AlternativeSpec::validate(Index d) const {
  require(d >= 1, "dimension must be positive");
  switch (family) {
    case Family::normal_mixture:
      require(p > 0.0 && p < 1.0, "nmix: p must lie in (0, 1)");
      require(std::isfinite(mu), "nmix: mu must be finite");
      break;
    case Family::student_t: require(nu > 0.0 && std::isfinite(nu), "t: nu must be positive"); break;
    case Family::iid_marginal:
    case Family::marginal_replace: validate_dist(dist, false); break;
    case Family::spherical: validate_dist(dist, true); break;
    case Family::nm_theta: {
      // Both Sigma_theta and Sigma_-theta must be positive definite.
      const double bound = d > 1 ? std::min(1.0, 1.0 / static_cast<double>(d - 1)) : 1.0;
      require(std::abs(theta) < bound, "nm: |theta| must be below " + format_number(bound) + " for d = " +
                                           std::to_string(d));
      break;
    }
    default: break;
  }
}

AlternativeSpec parse_alternative(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view name = trim(text.substr(0, colon));
  std::vector<std::pair<std::string_view, std::string_view>> kv;
  if (colon != std::string_view::npos) {
    for (std::string_view item : split_top(text.substr(colon + 1))) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected key=value in '" + std::string(text) + "'");
      kv.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
  }
  auto take = [&](std::string_view key) -> std::string_view {
    for (auto it = kv.begin(); it != kv.end(); ++it) {
      if (it->first == key) {
        const std::string_view v = it->second;
        kv.erase(it);
        return v;
      }
    }
    throw ConfigError("alternative '" + std::string(text) + "' is missing '" + std::string(key) + "'");
  };

  AlternativeSpec spec;
  using F = AlternativeSpec::Family;
  if (name == "normal") {
    spec.family = F::normal;
  } else if (name == "nmix") {
    spec.family = F::normal_mixture;
    spec.p = parse_number(take("p"), text);
    spec.mu = parse_number(take("mu"), text);
    const std::string_view sigma = take("sigma");
    if (sigma != "I" && sigma != "B") throw ConfigError("nmix: sigma must be I or B");
    spec.sigma_b = sigma == "B";
  } else if (name == "t") {
    spec.family = F::student_t;
    spec.nu = parse_number(take("nu"), text);
  } else if (name == "iid") {
    spec.family = F::iid_marginal;
    spec.dist = parse_univariate(take("dist"));
  } else if (name == "spherical") {
    spec.family = F::spherical;
    spec.dist = parse_univariate(take("radial"));
  } else if (name == "mar") {
    spec.family = F::marginal_replace;
    spec.dist = parse_univariate(take("dist"));
  } else if (name == "nm") {
    spec.family = F::nm_theta;
    spec.theta = parse_number(take("theta"), text);
  } else if (name == "sabsnorm") {
    spec.family = F::signed_abs_normal;
  } else if (name == "null-reference") {
    spec.family = F::null_reference;
  } else {
    throw ConfigError("unknown alternative family '" + std::string(name) + "'");
  }
  if (!kv.empty()) {
    throw ConfigError("alternative '" + std::string(text) + "': unexpected key '" + std::string(kv.front().first) + "'");
  }
  return spec;
}

Matrix equicorrelation(Index d, double rho) {
  Matrix m = Matrix::Constant(d, d, rho);
  m.diagonal().setOnes();
  return m;
}

Matrix draw_alternative(const AlternativeSpec& spec, Index d, Index n, Stream& rng) {
  try {
    spec.validate(d);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  using F = AlternativeSpec::Family;
  Matrix x(n, d);
  switch (spec.family) {
    case F::normal: return rng.normal_matrix(n, d);
    case F::normal_mixture: {
      const Matrix chol = spec.sigma_b ? Matrix(equicorrelation(d, 0.9).llt().matrixL())
                                       : Matrix::Identity(d, d);
      for (Index j = 0; j < n; ++j) {
        const bool shifted = rng.uniform() < spec.p;
        const Vector z = rng.normal_vector(d);
        if (shifted) {
          x.row(j) = (chol * z).transpose().array() + spec.mu;
        } else {
          x.row(j) = z.transpose();
        }
      }
      return x;
    }
    case F::student_t:
      for (Index j = 0; j < n; ++j) {
        const Vector z = rng.normal_vector(d);
        x.row(j) = z.transpose() / std::sqrt(rng.chi_squared(spec.nu) / spec.nu);
      }
      return x;
    case F::iid_marginal:
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < d; ++i) x(j, i) = spec.dist.draw(rng);
      }
      return x;
    case F::spherical:
      for (Index j = 0; j < n; ++j) {
        const Vector u = rng.unit_vector(d);
        x.row(j) = spec.dist.draw(rng) * u.transpose();
      }
      return x;
    case F::marginal_replace:
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i + 1 < d; ++i) x(j, i) = rng.normal();
        x(j, d - 1) = spec.dist.draw(rng);
      }
      return x;
    case F::nm_theta: {
      const Matrix plus = equicorrelation(d, spec.theta).llt().matrixL();
      const Matrix minus = equicorrelation(d, -spec.theta).llt().matrixL();
      for (Index j = 0; j < n; ++j) {
        const bool first = rng.uniform() < 0.5;
        const Vector z = rng.normal_vector(d);
        x.row(j) = ((first ? plus : minus) * z).transpose();
      }
      return x;
    }
    case F::signed_abs_normal:
      for (Index j = 0; j < n; ++j) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        x.row(j) = sign * rng.normal_vector(d).cwiseAbs().transpose();
      }
      return x;
    case F::null_reference: {
      const Matrix chol = equicorrelation(d, 0.5).llt().matrixL();
      const Vector mu = Vector::LinSpaced(d, 1.0, static_cast<double>(d));
      for (Index j = 0; j < n; ++j) x.row(j) = (mu + chol * rng.normal_vector(d)).transpose();
      return x;
    }
  }
  return x;
}

Sample sample_alternative(const AlternativeSpec& spec, Index d, Index n, Stream& rng) {
  return Sample(draw_alternative(spec, d, n, rng));
}

Sample null_reference(Index d, Index n, Stream& rng) {
  AlternativeSpec spec;
  spec.family = AlternativeSpec::Family::null_reference;
  return sample_alternative(spec, d, n, rng);
}

}  // namespace mvn
