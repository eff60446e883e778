#include "mvn/sphere_search.hpp"

#include "mvn/errors.hpp"
#include "mvn/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mvn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSeedSeparationCos = 0.95;

double sanitize(double v) { return std::isnan(v) ? kNegInf : v; }

/// Orthonormal basis of the tangent space {v : v.u = 0}, as columns.
Matrix tangent_basis(const Vector& u) {
  const Index d = u.size();
  Eigen::HouseholderQR<Matrix> qr(u);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return q.rightCols(d - 1);
}

}  // namespace

int SphereSearchConfig::effective_starts(Index d) const {
  if (starts > 0) return starts;
  return static_cast<int>(std::max<Index>(2 * d, 100 * (d - 1)));
}

void SphereSearchConfig::validate(Index d) const {
  if (!(tolerance > 0.0)) throw ConfigError("sphere search tolerance must be positive");
  if (refine < 1) throw ConfigError("sphere search needs refine >= 1");
  if (max_iters < 1) throw ConfigError("sphere search needs max_iters >= 1");
  if (starts < 0) throw ConfigError("sphere search starts must be nonnegative");
  if (starts > 0 && starts < 2 * d) throw ConfigError("sphere search needs at least 2d random starts");
}

SimplexResult nelder_mead_maximize(const std::function<double(const Vector&)>& f, Vector x0,
                                   double step, int max_iters, double tolerance) {
  const Index m = x0.size();
  std::vector<Vector> pts;
  std::vector<double> vals;
  pts.reserve(static_cast<std::size_t>(m + 1));
  SimplexResult out;
  auto eval = [&](const Vector& x) {
    ++out.evaluations;
    return sanitize(f(x));
  };
  pts.push_back(x0);
  vals.push_back(eval(x0));
  for (Index i = 0; i < m; ++i) {
    Vector x = x0;
    x(i) += step;
    vals.push_back(eval(x));
    pts.push_back(std::move(x));
  }
  std::vector<std::size_t> order(pts.size());
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    std::iota(order.begin(), order.end(), 0);
    // Descending by value; ties by index keep the run deterministic.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    double diameter = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      diameter = std::max(diameter, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    }
    const double spread = vals[best] - vals[worst];
    if (std::isfinite(vals[worst]) &&
        spread <= tolerance * (1.0 + std::abs(vals[best])) && diameter <= 1e-9) {
      out.converged = true;
      break;
    }
    if (diameter <= 1e-14) {
      out.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(m);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(m);

    const Vector reflected = centroid + (centroid - pts[worst]);
    const double fr = eval(reflected);
    if (fr > vals[best]) {
      const Vector expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(expanded);
      if (fe > fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr > vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr > vals[worst];
    const Vector contracted = outside ? Vector(centroid + 0.5 * (reflected - centroid))
                                      : Vector(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(contracted);
    if (fc > (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best_it = std::max_element(vals.begin(), vals.end());
  const auto best = static_cast<std::size_t>(best_it - vals.begin());
  out.x = pts[best];
  out.value = vals[best];
  return out;
}

SphereMaximum maximize_on_sphere(const SphereObjective& objective, Index d,
                                 const SphereSearchConfig& config, const Matrix& extra_starts) {
  config.validate(d);
  SphereMaximum result;
  result.value = kNegInf;

  std::vector<Vector> candidates;
  for (Index i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    candidates.push_back(e);
    candidates.push_back(-e);
  }
  if (d > 1) {
    Stream rng(config.seed, config.stream);
    const int starts = config.effective_starts(d);
    for (int i = 0; i < starts; ++i) candidates.push_back(rng.unit_vector(d));
    for (Index r = 0; r < extra_starts.rows(); ++r) {
      const double norm = extra_starts.row(r).norm();
      if (norm > 1e-12) candidates.push_back(extra_starts.row(r).transpose() / norm);
    }
  }

  std::vector<double> values(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    values[i] = sanitize(objective(candidates[i]));
    ++result.evaluations;
    if (values[i] > result.value) {
      result.value = values[i];
      result.direction = candidates[i];
    }
  }
  if (d == 1 || candidates.empty()) {
    if (!std::isfinite(result.value)) result.value = std::numeric_limits<double>::quiet_NaN();
    if (result.direction.size() == 0) result.direction = candidates.front();
    return result;
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  // Polish seeds are the best candidates that are not near an already chosen seed,
  // so separate local maxima get their own run.
  std::vector<std::size_t> seeds;
  for (std::size_t idx : order) {
    if (seeds.size() >= static_cast<std::size_t>(config.refine) || !std::isfinite(values[idx])) break;
    const bool near = std::any_of(seeds.begin(), seeds.end(), [&](std::size_t s) {
      return candidates[s].dot(candidates[idx]) > kSeedSeparationCos;
    });
    if (!near) seeds.push_back(idx);
  }
  for (std::size_t seed_index : seeds) {
    Vector u0 = candidates[seed_index];
    double step = 0.1;
    double current = values[seed_index];
    // Restart from the incumbent with a smaller simplex until a restart stops gaining.
    for (int restart = 0; restart < 4; ++restart) {
      const Matrix basis = tangent_basis(u0);
      auto in_tangent = [&](const Vector& z) {
        Vector u = u0 + basis * z;
        u.normalize();
        return objective(u);
      };
      const SimplexResult sr = nelder_mead_maximize(in_tangent, Vector::Zero(d - 1), step,
                                                    config.max_iters, config.tolerance);
      result.evaluations += sr.evaluations;
      if (!sr.converged) result.converged = false;
      Vector u = u0 + basis * sr.x;
      u.normalize();
      const bool improved = sr.value > current + config.tolerance * (1.0 + std::abs(current));
      if (sr.value >= current) {
        u0 = u;
        current = sr.value;
      }
      if (!improved && restart > 0) break;
      step = 1e-3;
    }
    if (current > result.value) {
      result.value = current;
      result.direction = u0;
    }
  }
  if (!std::isfinite(result.value)) result.value = std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace mvn
