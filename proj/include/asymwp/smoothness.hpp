#pragma once

// One-sided (t -> 0+) derivative estimation: right Gateaux quotients with
// first-order Richardson extrapolation, and sampled right Frechet remainders.

#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "asymwp/asymnorm.hpp"

namespace asymwp {

using ScalarField = std::function<double(std::span<const double>)>;

/// t_k = 0.1 * 2^-k, k = 0..12.
inline Vec default_schedule() {
  Vec t(13);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.1 * std::ldexp(1.0, -static_cast<int>(k));
  return t;
}

struct DerivativeEstimate {
  Vec direction;
  Vec t_schedule;
  Vec quotients;
  double extrapolated = 0.0;
  bool converged = false;
};

inline DerivativeEstimate right_gateaux_estimate(const ScalarField& f, std::span<const double> point,
                                                 std::span<const double> direction,
                                                 std::span<const double> schedule, double tol = 1e-4) {
  require_dim(direction, point.size(), "right_gateaux_estimate");
  if (schedule.size() < 3) throw std::invalid_argument("right_gateaux_estimate: schedule needs >= 3 steps");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0)) throw std::invalid_argument("right_gateaux_estimate: steps must be positive");
    if (k > 0 && !(schedule[k] < schedule[k - 1]))
      throw std::invalid_argument("right_gateaux_estimate: schedule must be strictly decreasing");
  }
  const double f0 = f(point);
  if (!std::isfinite(f0)) throw std::domain_error("right_gateaux_estimate: function not finite at point");

  DerivativeEstimate est;
  est.direction.assign(direction.begin(), direction.end());
  est.t_schedule.assign(schedule.begin(), schedule.end());
  est.quotients.resize(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Vec x = axpy(schedule[k], direction, point);
    est.quotients[k] = (f(x) - f0) / schedule[k];
  }
  const std::size_t m = schedule.size();
  const double q1 = est.quotients[m - 2], q2 = est.quotients[m - 1];
  const double r = schedule[m - 2] / schedule[m - 1];
  est.extrapolated = (r * q2 - q1) / (r - 1.0);

  const double q0 = est.quotients[m - 3];
  const double scale = std::max(1.0, std::abs(q2));
  est.converged = std::isfinite(q0) && std::isfinite(q1) && std::isfinite(q2) &&
                  std::max({q0, q1, q2}) - std::min({q0, q1, q2}) <= tol * scale;
  return est;
}

inline DerivativeEstimate right_gateaux_estimate(const ScalarField& f, std::span<const double> point,
                                                 std::span<const double> direction) {
  const Vec sched = default_schedule();
  return right_gateaux_estimate(f, point, direction, sched);
}

struct RemainderCurve {
  Vec radii;
  Vec remainder;
  std::vector<std::size_t> samples_used;
  std::uint64_t seed = 0;

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,r\n";
    for (std::size_t i = 0; i < radii.size(); ++i) os << radii[i] << ',' << remainder[i] << '\n';
    return os.str();
  }
};

enum class FrechetVerdict { consistent, inconsistent, inconclusive };

inline std::string to_string(FrechetVerdict v) {
  switch (v) {
    case FrechetVerdict::consistent: return "frechet-consistent";
    case FrechetVerdict::inconsistent: return "inconsistent";
    case FrechetVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct FrechetResult {
  RemainderCurve curve;
  FrechetVerdict verdict = FrechetVerdict::inconclusive;
};

struct FrechetOptions {
  Vec radii;  // strictly decreasing; empty means 0.1 * 2^-k, k = 0..9
  std::size_t sphere_samples = 64;
  std::uint64_t seed = 1;
  double tol = 1e-2;
  std::optional<ConeMask> cone;  // sample only directions in this cone
};

/// r(t) = max over sampled ||y|| = t of |f(x+y) - f(x) - <D, y>| / t. Samples
/// where f(x+y) is infinite are skipped; the same direction set is reused
/// at every radius. Verdict: consistent iff r is nonincreasing and r(t_min) <= tol.
inline FrechetResult right_frechet_check(const ScalarField& f, std::span<const double> point,
                                         std::span<const double> candidate, const ScalarField& sphere_norm,
                                         const FrechetOptions& opt = {}) {
  const std::size_t n = point.size();
  require_dim(candidate, n, "right_frechet_check");
  require_finite(candidate, "right_frechet_check candidate");
  Vec radii = opt.radii;
  if (radii.empty()) {
    radii.resize(10);
    for (std::size_t k = 0; k < radii.size(); ++k) radii[k] = 0.1 * std::ldexp(1.0, -static_cast<int>(k));
  }
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] < radii[k - 1])))
      throw std::invalid_argument("right_frechet_check: radii must be positive and strictly decreasing");
  }
  const double f0 = f(point);
  if (!std::isfinite(f0)) throw std::domain_error("right_frechet_check: function not finite at point");

  // Directions of unit norm; null directions have no sphere representative and are redrawn.
  Rng rng(opt.seed);
  std::vector<Vec> dirs;
  std::size_t attempts = 0;
  while (dirs.size() < opt.sphere_samples && attempts++ < 100 * opt.sphere_samples + 100) {
    Vec u = gaussian_vector(n, rng);
    if (opt.cone) u = fold_into(*opt.cone, u);
    const double len = sphere_norm(u);
    if (!(len > 1e-12) || !std::isfinite(len)) continue;
    for (double& v : u) v /= len;
    dirs.push_back(std::move(u));
  }

  FrechetResult res;
  res.curve.radii = radii;
  res.curve.seed = opt.seed;
  bool any_sample = false;
  for (double t : radii) {
    double worst = 0.0;
    std::size_t used = 0;
    for (const Vec& u : dirs) {
      Vec y = u;
      for (double& v : y) v *= t;
      const double fy = f(axpy(1.0, y, point));
      if (!std::isfinite(fy)) continue;
      worst = std::max(worst, std::abs(fy - f0 - dot(candidate, y)) / t);
      ++used;
    }
    any_sample = any_sample || used > 0;
    res.curve.remainder.push_back(used > 0 ? worst : kInf);
    res.curve.samples_used.push_back(used);
  }
  if (!any_sample || res.curve.samples_used.back() == 0) {
    res.verdict = FrechetVerdict::inconclusive;
    return res;
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < radii.size(); ++k) {
    const double prev = res.curve.remainder[k - 1], cur = res.curve.remainder[k];
    if (std::isfinite(prev) && cur > prev * (1.0 + 1e-9) + 1e-12) decreasing = false;
  }
  res.verdict = decreasing && res.curve.remainder.back() <= opt.tol ? FrechetVerdict::consistent
                                                                    : FrechetVerdict::inconsistent;
  return res;
}

/// Spheres measured by the asymmetric norm of the given side.
inline FrechetResult right_frechet_check(const ScalarField& f, std::span<const double> point,
                                         std::span<const double> candidate, const AsymNorm& norm, Side side,
                                         const FrechetOptions& opt = {}) {
  require_dim(point, norm.dim(), "right_frechet_check");
  const ScalarField sphere = [&norm, side](std::span<const double> u) { return norm.on_side(side, u); };
  return right_frechet_check(f, point, candidate, sphere, opt);
}

}  // namespace asymwp
