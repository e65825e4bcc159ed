#pragma once

// Asymmetric norms on R^n: evaluation of p, its conjugate p(-x) and the
// symmetrization max(p, p-bar); dual cones of functionals bounded above on the
// unit ball, their norms, and the asymmetric weak-convergence test.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "asymwp/common.hpp"

namespace asymwp {

enum class NormFamily { half_euclidean, weighted_asym, custom };

/// Which dual cone a functional is tested against: X* (bounded above on the
/// p-unit ball) or the cone of the conjugate space (bounded above on the p-bar ball).
enum class Side { primal, conjugate };

class AsymNorm {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  static AsymNorm half_euclidean(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("half_euclidean: dim must be positive");
    AsymNorm n;
    n.family_ = NormFamily::half_euclidean;
    n.dim_ = dim;
    return n;
  }

  /// p(x) = sum_i a_i max(x_i, 0) + b_i max(-x_i, 0).
  static AsymNorm weighted_asym(Vec a, Vec b) {
    if (a.empty() || a.size() != b.size())
      throw DimensionError("weighted_asym: a and b must be nonempty with equal length");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] >= 0.0) || !(b[i] >= 0.0) || !std::isfinite(a[i]) || !std::isfinite(b[i]))
        throw std::invalid_argument("weighted_asym: weights must be finite and nonnegative");
      if (a[i] + b[i] <= 0.0)
        throw std::invalid_argument("weighted_asym: a_i + b_i must be positive (coordinate " +
                                    std::to_string(i) + ")");
    }
    AsymNorm n;
    n.family_ = NormFamily::weighted_asym;
    n.dim_ = a.size();
    n.pos_ = std::move(a);
    n.neg_ = std::move(b);
    return n;
  }

  /// Arbitrary deterministic evaluator. The axioms are the caller's contract;
  /// `check_axioms` can sample them.
  static AsymNorm custom(std::size_t dim, Evaluator eval, std::string label = "custom") {
    if (dim == 0) throw std::invalid_argument("custom norm: dim must be positive");
    if (!eval) throw std::invalid_argument("custom norm: empty evaluator");
    AsymNorm n;
    n.family_ = NormFamily::custom;
    n.dim_ = dim;
    n.eval_ = std::make_shared<Evaluator>(std::move(eval));
    n.label_ = std::move(label);
    return n;
  }

  NormFamily family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return dim_; }
  const Vec& pos_weights() const noexcept { return pos_; }
  const Vec& neg_weights() const noexcept { return neg_; }
  const std::string& label() const noexcept { return label_; }
  bool builtin() const noexcept { return family_ != NormFamily::custom; }

  double operator()(std::span<const double> x) const {
    require_dim(x, dim_, "eval_norm");
    require_finite(x, "eval_norm");
    return raw(x, 1.0);
  }

  double conjugate(std::span<const double> x) const {
    require_dim(x, dim_, "conjugate_norm_eval");
    require_finite(x, "conjugate_norm_eval");
    return raw(x, -1.0);
  }

  double symmetrized(std::span<const double> x) const {
    require_dim(x, dim_, "symmetrized_norm_eval");
    require_finite(x, "symmetrized_norm_eval");
    return std::max(raw(x, 1.0), raw(x, -1.0));
  }

  /// p for the primal side, p-bar for the conjugate side.
  double on_side(Side side, std::span<const double> x) const {
    return side == Side::primal ? (*this)(x) : conjugate(x);
  }

 private:
  AsymNorm() = default;

  double raw(std::span<const double> x, double sign) const {
    switch (family_) {
      case NormFamily::half_euclidean: {
        double s = 0.0;
        for (double v : x) {
          const double pos = std::max(0.0, sign * v);
          s += pos * pos;
        }
        return std::sqrt(s);
      }
      case NormFamily::weighted_asym: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double v = sign * x[i];
          s += v > 0.0 ? pos_[i] * v : neg_[i] * (-v);
        }
        return s;
      }
      case NormFamily::custom: {
        if (sign > 0.0) return (*eval_)(x);
        const Vec neg = negate(x);
        return (*eval_)(neg);
      }
    }
    return 0.0;
  }

  NormFamily family_ = NormFamily::half_euclidean;
  std::size_t dim_ = 0;
  Vec pos_, neg_;
  std::shared_ptr<const Evaluator> eval_;
  std::string label_;
};

inline double eval_norm(const AsymNorm& p, std::span<const double> x) { return p(x); }
inline double conjugate_norm_eval(const AsymNorm& p, std::span<const double> x) { return p.conjugate(x); }
inline double symmetrized_norm_eval(const AsymNorm& p, std::span<const double> x) { return p.symmetrized(x); }

/// A linear functional on R^n acting by the dot product.
struct Functional {
  Vec coeffs;

  std::size_t dim() const noexcept { return coeffs.size(); }
  double operator()(std::span<const double> x) const { return dot(coeffs, x); }
  Functional operator-() const { return Functional{negate(coeffs)}; }
};

enum class Membership { member, non_member, unknown };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non_member";
    case Membership::unknown: return "unknown";
  }
  return "unknown";
}

/// Outcome of a dual-cone membership test. For members `bound` is the
/// constant C with phi(x) <= C ||x||; for non-members `ray` is a direction along
/// which the norm vanishes but phi grows. `samples` is 0 for analytic decisions.
struct MembershipCertificate {
  Membership verdict = Membership::unknown;
  double bound = 0.0;
  Vec ray;
  std::size_t samples = 0;

  bool is_member() const noexcept { return verdict == Membership::member; }
};

class NotInDualCone : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CustomSearchOptions {
  std::size_t samples = 4096;
  std::uint64_t seed = 0x5eed;
  double null_tol = 1e-12;
  double ratio_cap = 1e8;
  std::size_t refine_iterations = 400;
};

namespace detail {

inline MembershipCertificate analytic_primal_membership(const AsymNorm& p, const Functional& phi) {
  const std::size_t n = p.dim();
  MembershipCertificate cert;
  if (p.family() == NormFamily::half_euclidean) {
    for (std::size_t i = 0; i < n; ++i) {
      if (phi.coeffs[i] < 0.0) {
        cert.verdict = Membership::non_member;
        cert.ray.assign(n, 0.0);
        cert.ray[i] = -1.0;
        return cert;
      }
    }
    cert.verdict = Membership::member;
    cert.bound = euclidean_norm(phi.coeffs);
    return cert;
  }
  // weighted_asym: extreme points of the unit ball are e_i / a_i and -e_i / b_i.
  const Vec& a = p.pos_weights();
  const Vec& b = p.neg_weights();
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = phi.coeffs[i];
    if (v > 0.0) {
      if (a[i] == 0.0) {
        cert.verdict = Membership::non_member;
        cert.ray.assign(n, 0.0);
        cert.ray[i] = 1.0;
        return cert;
      }
      c = std::max(c, v / a[i]);
    } else if (v < 0.0) {
      if (b[i] == 0.0) {
        cert.verdict = Membership::non_member;
        cert.ray.assign(n, 0.0);
        cert.ray[i] = -1.0;
        return cert;
      }
      c = std::max(c, -v / b[i]);
    }
  }
  cert.verdict = Membership::member;
  cert.bound = c;
  return cert;
}

inline MembershipCertificate custom_membership(const AsymNorm& p, const Functional& phi, Side side,
                                               const CustomSearchOptions& opt) {
  const std::size_t n = p.dim();
  Rng rng(opt.seed);
  MembershipCertificate cert;

  std::vector<Vec> dirs;
  dirs.reserve(2 * n + opt.samples);
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
    e[i] = -1.0;
    dirs.push_back(e);
  }
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Vec d = gaussian_vector(n, rng);
    const double len = euclidean_norm(d);
    if (len == 0.0) continue;
    for (double& v : d) v /= len;
    dirs.push_back(std::move(d));
  }

  double best = -kInf;
  Vec best_dir;
  for (const Vec& d : dirs) {
    const double pd = p.on_side(side, d);
    const double fd = phi(d);
    if (pd <= opt.null_tol) {
      if (fd > opt.null_tol) {
        cert.verdict = Membership::non_member;
        cert.ray = d;
        cert.samples = dirs.size();
        return cert;
      }
      continue;
    }
    const double ratio = fd / pd;
    if (ratio > best) {
      best = ratio;
      best_dir = d;
    }
  }
  cert.samples = dirs.size();
  if (best_dir.empty()) {
    // every sampled direction is null and phi <= 0 on all of them
    cert.verdict = Membership::member;
    cert.bound = 0.0;
    return cert;
  }

  // hill-climb on the ratio phi(d)/p(d) over the Euclidean sphere
  double step = 0.25;
  double half_way = best;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t it = 0; it < opt.refine_iterations; ++it) {
    Vec cand = best_dir;
    for (double& v : cand) v += step * normal(rng);
    const double len = euclidean_norm(cand);
    if (len == 0.0) continue;
    for (double& v : cand) v /= len;
    const double pd = p.on_side(side, cand);
    const double fd = phi(cand);
    if (pd <= opt.null_tol) {
      if (fd > opt.null_tol) {
        cert.verdict = Membership::non_member;
        cert.ray = cand;
        return cert;
      }
      continue;
    }
    const double ratio = fd / pd;
    if (ratio > best) {
      best = ratio;
      best_dir = cand;
    } else {
      step = std::max(step * 0.97, 1e-9);
    }
    if (it + 1 == opt.refine_iterations / 2) half_way = best;
  }

  const bool still_growing = half_way > 0.0 && best > 2.0 * half_way;
  if (best > opt.ratio_cap || still_growing) {
    cert.verdict = Membership::unknown;
    cert.bound = best;
    cert.ray = best_dir;
    return cert;
  }
  cert.verdict = Membership::member;
  cert.bound = std::max(0.0, best);
  return cert;
}

}  // namespace detail

/// Decides whether phi is bounded above on the unit ball of the chosen side.
/// Builtin families are decided analytically; custom norms by ray search.
inline MembershipCertificate dual_cone_membership(const AsymNorm& p, const Functional& phi, Side side,
                                                  const CustomSearchOptions& opt = {}) {
  require_dim(phi.coeffs, p.dim(), "dual_cone_membership");
  require_finite(phi.coeffs, "dual_cone_membership");
  bool zero = true;
  for (double v : phi.coeffs) zero = zero && v == 0.0;
  if (zero) return {Membership::member, 0.0, {}, 0};

  if (p.builtin()) {
    // the conjugate-side cone is the negation of the primal one
    if (side == Side::primal) return detail::analytic_primal_membership(p, phi);
    MembershipCertificate cert = detail::analytic_primal_membership(p, -phi);
    if (!cert.ray.empty()) cert.ray = negate(cert.ray);
    return cert;
  }
  return detail::custom_membership(p, phi, side, opt);
}

/// sup of phi over the unit ball of the chosen side.
inline double dual_norm(const AsymNorm& p, const Functional& phi, Side side,
                        const CustomSearchOptions& opt = {}) {
  const MembershipCertificate cert = dual_cone_membership(p, phi, side, opt);
  if (cert.verdict == Membership::non_member)
    throw NotInDualCone("dual_norm: functional is not in the dual cone");
  if (cert.verdict == Membership::unknown)
    throw NotInDualCone("dual_norm: membership inconclusive for custom norm");
  return cert.bound;
}

/// Orthant description of the dual cone for builtin families; nullopt for custom norms.
inline std::optional<ConeMask> dual_cone_mask(const AsymNorm& p, Side side) {
  if (!p.builtin()) return std::nullopt;
  ConeMask mask(p.dim(), SignConstraint::nonneg);
  if (p.family() == NormFamily::weighted_asym) {
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const bool up = p.pos_weights()[i] > 0.0;
      const bool down = p.neg_weights()[i] > 0.0;
      mask[i] = up && down ? SignConstraint::any
                : up       ? SignConstraint::nonneg
                : down     ? SignConstraint::nonpos
                           : SignConstraint::zero;
    }
  }
  return side == Side::primal ? mask : flip(mask);
}

/// Seeded sample of nonzero functionals from the dual cone of the chosen side.
/// Builtin: coordinate generators first, then random elements of the orthant.
/// Custom: random candidates that pass the membership search.
inline std::vector<Functional> sample_dual_cone(const AsymNorm& p, Side side, std::size_t count,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Functional> out;
  const std::size_t n = p.dim();
  if (auto mask = dual_cone_mask(p, side)) {
    for (std::size_t i = 0; i < n && out.size() < count; ++i) {
      for (double s : {1.0, -1.0}) {
        Vec e(n, 0.0);
        e[i] = s;
        if (satisfies(*mask, e) && out.size() < count) out.push_back({e});
      }
    }
    std::size_t guard = 0;
    while (out.size() < count && guard++ < 100 * count) {
      Vec v = fold_into(*mask, gaussian_vector(n, rng));
      if (euclidean_norm(v) > 1e-3) out.push_back({std::move(v)});
    }
    return out;
  }
  std::size_t guard = 0;
  while (out.size() < count && guard++ < 50 * count) {
    Functional cand{gaussian_vector(n, rng)};
    CustomSearchOptions opt;
    opt.samples = 512;
    opt.refine_iterations = 100;
    opt.seed = derive_seed(seed, guard);
    if (dual_cone_membership(p, cand, side, opt).is_member()) out.push_back(std::move(cand));
  }
  return out;
}

/// Generators of the null cone {d : ||d|| = 0} on the chosen side
/// (directions invisible to the norm), scaled to Euclidean length one.
inline std::vector<Vec> null_directions(const AsymNorm& p, Side side, std::size_t random_extra,
                                        std::uint64_t seed) {
  const std::size_t n = p.dim();
  std::vector<Vec> gens;
  if (p.builtin()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (double s : {1.0, -1.0}) {
        Vec e(n, 0.0);
        e[i] = s;
        if (p.on_side(side, e) == 0.0) gens.push_back(e);
      }
    }
    Rng rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::size_t base = gens.size();
    for (std::size_t k = 0; k < random_extra && base > 1; ++k) {
      Vec d(n, 0.0);
      for (std::size_t j = 0; j < base; ++j) {
        const double w = uni(rng);
        for (std::size_t i = 0; i < n; ++i) d[i] += w * gens[j][i];
      }
      const double len = euclidean_norm(d);
      if (len > 1e-9) {
        for (double& v : d) v /= len;
        gens.push_back(std::move(d));
      }
    }
    return gens;
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < 4096 && gens.size() < n + random_extra; ++k) {
    Vec d = gaussian_vector(n, rng);
    const double len = euclidean_norm(d);
    for (double& v : d) v /= len;
    if (p.on_side(side, d) <= 1e-12) gens.push_back(std::move(d));
  }
  return gens;
}

struct WeakOptions {
  TailWindow window{};
  double tol = 1e-3;
};

struct WeakVerdict {
  double limsup_estimate = 0.0;
  bool converges = false;
};

/// For each functional, estimates limsup phi(x_n - x) by the maximum over the
/// trailing window and compares it against the tolerance.
inline std::vector<WeakVerdict> weak_limsup_test(const AsymNorm& p, Side side,
                                                 std::span<const Vec> sequence,
                                                 std::span<const double> limit,
                                                 std::span<const Functional> duals,
                                                 const WeakOptions& opt = {}) {
  if (sequence.empty()) throw std::invalid_argument("weak_limsup_test: empty sequence");
  if (sequence.size() < 3) throw std::invalid_argument("weak_limsup_test: need at least 3 terms");
  require_dim(limit, p.dim(), "weak_limsup_test limit");
  for (const Vec& x : sequence) require_dim(x, p.dim(), "weak_limsup_test sequence");
  for (const Functional& phi : duals) {
    if (!dual_cone_membership(p, phi, side).is_member())
      throw NotInDualCone("weak_limsup_test: functional outside the dual cone");
  }
  std::vector<WeakVerdict> out;
  out.reserve(duals.size());
  Vec pairing(sequence.size());
  for (const Functional& phi : duals) {
    for (std::size_t i = 0; i < sequence.size(); ++i) pairing[i] = phi(subtract(sequence[i], limit));
    const double ls = tail_max(pairing, opt.window);
    out.push_back({ls, ls <= opt.tol});
  }
  return out;
}

inline nlohmann::json norm_to_json(const AsymNorm& p) {
  switch (p.family()) {
    case NormFamily::half_euclidean: return {{"family", "half_euclidean"}, {"dim", p.dim()}};
    case NormFamily::weighted_asym:
      return {{"family", "weighted_asym"}, {"a", p.pos_weights()}, {"b", p.neg_weights()}};
    case NormFamily::custom: break;
  }
  throw std::invalid_argument("norm_to_json: custom norms are not serializable");
}

inline AsymNorm norm_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "half_euclidean") {
    const auto dim = j.at("dim").get<long long>();
    if (dim <= 0) throw std::invalid_argument("norm_from_json: dim must be positive");
    return AsymNorm::half_euclidean(static_cast<std::size_t>(dim));
  }
  if (family == "weighted_asym") return AsymNorm::weighted_asym(j.at("a").get<Vec>(), j.at("b").get<Vec>());
  throw std::invalid_argument("norm_from_json: unknown family '" + family + "'");
}

}  // namespace asymwp
