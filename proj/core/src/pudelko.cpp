#include "mvn/pudelko.hpp"

#include "mvn/errors.hpp"
#include "mvn/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace mvn {
namespace {

constexpr double kSeedSeparation = 0.2;

std::vector<Vector> grid_directions(Index d, const SphereSearchConfig& config) {
  std::vector<Vector> dirs;
  if (d == 1) {
    dirs.push_back(Vector::Ones(1));
    dirs.push_back(-Vector::Ones(1));
    return dirs;
  }
  if (d == 2) {
    constexpr int kAngles = 72;
    for (int i = 0; i < kAngles; ++i) {
      const double a = 2.0 * std::numbers::pi * i / kAngles;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
    return dirs;
  }
  for (Index i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  Stream rng(config.seed, config.stream);
  const Index extra = std::max<Index>(48 * d, config.effective_starts(d));
  for (Index i = 0; i < extra; ++i) dirs.push_back(rng.unit_vector(d));
  return dirs;
}

}  // namespace

double pudelko_ratio(const ScaledResiduals& y, const Eigen::Ref<const Vector>& t) {
  const double norm = t.norm();
  if (norm == 0.0) return 0.0;
  const Eigen::ArrayXd phase = (y.rows() * t).array();
  const double re = phase.cos().mean() - std::exp(-0.5 * norm * norm);
  const double im = phase.sin().mean();
  return std::hypot(re, im) / norm;
}

SphereMaximum pudelko(const ScaledResiduals& y, double r, const SphereSearchConfig& config) {
  if (!std::isfinite(r) || !(r > 0.0)) {
    throw ParameterError("Pudelko: radius must be positive, got " + std::to_string(r));
  }
  const Index d = y.d();
  config.validate(d);

  // Points outside the ball are pulled back to its boundary.
  auto objective = [&](const Vector& t) {
    const double norm = t.norm();
    if (norm > r) return pudelko_ratio(y, t * (r / norm));
    return pudelko_ratio(y, t);
  };

  std::vector<Vector> points;
  std::vector<double> values;
  for (const Vector& u : grid_directions(d, config)) {
    for (int i = 1; i <= kPudelkoRadii; ++i) {
      Vector t = u * (r * i / kPudelkoRadii);
      values.push_back(pudelko_ratio(y, t));
      points.push_back(std::move(t));
    }
  }

  SphereMaximum result;
  result.evaluations = static_cast<int>(points.size());
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  result.value = values[order.front()];
  result.direction = points[order.front()];

  // The ratio is even in t, so seeds closer than kSeedSeparation * r to a chosen seed
  // or to its mirror image would only rediscover the same maximum.
  const double step = r / kPudelkoRadii;
  std::vector<std::size_t> seeds;
  for (std::size_t idx : order) {
    if (seeds.size() >= static_cast<std::size_t>(config.refine)) break;
    const bool near = std::any_of(seeds.begin(), seeds.end(), [&](std::size_t s) {
      const double gap = std::min((points[s] - points[idx]).norm(), (points[s] + points[idx]).norm());
      return gap < kSeedSeparation * r;
    });
    if (!near) seeds.push_back(idx);
  }
  for (std::size_t seed_index : seeds) {
    Vector x = points[seed_index];
    double current = values[seed_index];
    double s = step;
    for (int restart = 0; restart < 4; ++restart) {
      const SimplexResult sr = nelder_mead_maximize(objective, x, s, config.max_iters, config.tolerance);
      result.evaluations += sr.evaluations;
      if (!sr.converged) result.converged = false;
      const bool improved = sr.value > current + config.tolerance * (1.0 + std::abs(current));
      if (sr.value >= current) {
        x = sr.x;
        current = sr.value;
      }
      if (!improved) break;
      s = 0.1 * step;
    }
    if (current > result.value) {
      result.value = current;
      const double norm = x.norm();
      result.direction = norm > r ? Vector(x * (r / norm)) : x;
    }
  }
  result.value *= std::sqrt(static_cast<double>(y.n()));
  return result;
}

}  // namespace mvn
