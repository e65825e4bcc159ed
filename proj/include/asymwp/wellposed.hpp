#pragma once

// Tikhonov well-posedness diagnostics for g = f - phi on an asymmetrically
// normed R^n: minimisation, minimising-sequence generators, the checks for
// statements (ii) and (iii), evidence for statement (i) through the conjugate
// f* at phi, and the well-posedness modulus alpha with its gauge conjugate.

#include <future>
#include <optional>
#include <sstream>
#include <string>

#include "asymwp/asymnorm.hpp"
#include "asymwp/conjugate.hpp"
#include "asymwp/smoothness.hpp"

namespace asymwp {

/// Analytic description of f. `conjugate` is f* on the conjugate dual cone
/// (+inf outside it); gradient, hessian (row-major n x n) and conjugate may be left empty.
struct ClosedForm {
  std::string name;
  ScalarField value;
  std::function<Vec(std::span<const double>)> gradient;
  std::function<Vec(std::span<const double>)> hessian;
  ScalarField conjugate;
  bool convex = false;
};

struct Tolerances {
  double converge = 1e-3;    // trailing-window distance for "converges"
  double minimising = 1e-6;  // g(y_last) - inf g for "minimising"
  double grid = 0.05;        // f** vs f on grids
  double frechet = 1e-2;     // remainder at the smallest radius
  double gateaux = 1e-4;     // directional derivative vs <psi, x>
};

class Problem {
 public:
  struct Options {
    std::optional<GridSpec> dual_grid;
    std::optional<bool> convex;
    std::optional<MembershipCertificate> phi_certificate;
    std::optional<ConeMask> dual_mask;
  };

  Problem(std::optional<GridFn> f_grid, std::optional<ClosedForm> closed, Functional phi, AsymNorm norm,
          Options opt = {})
      : grid_f_(std::move(f_grid)), closed_(std::move(closed)), phi_(std::move(phi)), norm_(std::move(norm)) {
    if (!grid_f_ && !closed_) throw std::invalid_argument("Problem: need a grid function or a closed form");
    if (closed_ && !closed_->value) throw std::invalid_argument("Problem: closed form without value");
    require_dim(phi_.coeffs, norm_.dim(), "Problem phi");
    if (grid_f_) {
      grid_f_->validate();
      if (grid_f_->grid.dims() != norm_.dim()) throw DimensionError("Problem: grid dimension mismatch");
    }
    cert_ = opt.phi_certificate ? *opt.phi_certificate : dual_cone_membership(norm_, phi_, Side::conjugate);
    if (!cert_.is_member())
      throw NotInDualCone("Problem: phi must lie in the dual cone of the conjugate space (" +
                          to_string(cert_.verdict) + ")");
    mask_ = opt.dual_mask ? opt.dual_mask : dual_cone_mask(norm_, Side::conjugate);
    dual_grid_ = std::move(opt.dual_grid);
    if (dual_grid_ && dual_grid_->dims() != norm_.dim()) throw DimensionError("Problem: dual grid dimension");
    convex_ = opt.convex.value_or(closed_ ? closed_->convex : false);
  }

  std::size_t dim() const noexcept { return norm_.dim(); }
  const AsymNorm& norm() const noexcept { return norm_; }
  const Functional& phi() const noexcept { return phi_; }
  const MembershipCertificate& phi_certificate() const noexcept { return cert_; }
  const std::optional<GridFn>& grid_function() const noexcept { return grid_f_; }
  const std::optional<ClosedForm>& closed_form() const noexcept { return closed_; }
  const std::optional<GridSpec>& dual_grid() const noexcept { return dual_grid_; }
  const std::optional<ConeMask>& cone_mask() const noexcept { return mask_; }
  bool convex() const noexcept { return convex_; }
  bool has_gradient() const noexcept { return closed_ && static_cast<bool>(closed_->gradient); }

  /// Closed form when present, otherwise the nearest grid value (+inf off the grid box).
  double f(std::span<const double> x) const {
    if (closed_) return closed_->value(x);
    if (!grid_f_->grid.contains(x)) return kInf;
    return grid_f_->nearest_value(x);
  }

  double g(std::span<const double> x) const { return f(x) - phi_(x); }

  Vec grad_g(std::span<const double> x) const {
    if (!has_gradient()) throw std::logic_error("Problem: no gradient available");
    return subtract(closed_->gradient(x), phi_.coeffs);
  }

  double f_conjugate(std::span<const double> y) const {
    if (closed_ && closed_->conjugate) return closed_->conjugate(y);
    if (mask_ && !satisfies(*mask_, y)) return kInf;
    if (grid_f_) return conjugate_at(*grid_f_, y);
    throw std::logic_error("Problem: no route to evaluate f*");
  }

 private:
  std::optional<GridFn> grid_f_;
  std::optional<ClosedForm> closed_;
  Functional phi_;
  AsymNorm norm_;
  MembershipCertificate cert_;
  std::optional<ConeMask> mask_;
  std::optional<GridSpec> dual_grid_;
  bool convex_ = false;
};

/// f = p-bar^2 for the half-Euclidean norm on [-radius, radius]^n with spacing h,
/// paired with phi = y. f*(y) = p-bar(y)^2 / 4 on the nonpositive orthant.
inline Problem example1_problem(Vec y, double h = 0.02, double radius = 2.0, std::size_t cap = kDefaultGridCap) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("example1: empty y");
  const AsymNorm norm = AsymNorm::half_euclidean(n);
  const auto count = static_cast<std::size_t>(std::llround(2.0 * radius / h)) + 1;
  const GridSpec grid = GridSpec::cube(n, -radius, radius, count, cap);

  ClosedForm cf;
  cf.name = "pbar_squared";
  cf.convex = true;
  cf.value = [norm](std::span<const double> x) {
    const double v = norm.conjugate(x);
    return v * v;
  };
  cf.gradient = [](std::span<const double> x) {
    Vec gr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) gr[i] = -2.0 * std::max(0.0, -x[i]);
    return gr;
  };
  cf.conjugate = [norm](std::span<const double> z) {
    for (double v : z)
      if (v > 0.0) return kInf;
    const double v = norm.conjugate(z);
    return v * v / 4.0;
  };
  GridFn fg = GridFn::sample(grid, cf.value);
  Problem::Options opt;
  opt.dual_grid = grid;
  opt.convex = true;
  return Problem(std::move(fg), std::move(cf), Functional{std::move(y)}, norm, std::move(opt));
}

// ---------------------------------------------------------------------------

enum class Method { grid_scan, descent };

inline std::string to_string(Method m) { return m == Method::grid_scan ? "grid-scan" : "descent"; }

struct DivergenceWitness {
  Vec point;
  Vec direction;
  double decrease = 0.0;
};

struct MinimisationReport {
  Vec argmin;
  std::vector<Vec> ties;  // grid points within rounding of the minimum, lowest index first
  double inf_value = 0.0;
  Method method = Method::grid_scan;
  double gap_bound = 0.0;  // 0 for a grid scan, final gradient norm for descent
  std::optional<std::size_t> grid_index;
  std::optional<DivergenceWitness> divergence;
};

struct MinimiseOptions {
  double gradient_tol = 1e-8;
  std::size_t max_iterations = 50000;
  std::size_t max_ties = 256;
};

namespace detail {

// Solves (H + shift I) z = b by Gaussian elimination with partial pivoting; empty on breakdown.
inline Vec solve_dense(Vec h, Vec b, double shift) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] += shift;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(h[r * n + c]) > std::abs(h[piv * n + c])) piv = r;
    if (std::abs(h[piv * n + c]) < 1e-300) return {};
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h[c * n + j], h[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = h[r * n + c] / h[c * n + c];
      for (std::size_t j = c; j < n; ++j) h[r * n + j] -= f * h[c * n + j];
      b[r] -= f * b[c];
    }
  }
  Vec z(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= h[c * n + j] * z[j];
    z[c] = s / h[c * n + c];
  }
  return z;
}

// One backtracked descent step on g (Newton direction when a Hessian is
// available and gives descent, else the negative gradient); false when stuck.
inline bool armijo_step(const Problem& prob, Vec& x, double& gx, double& step) {
  const Vec gr = prob.grad_g(x);
  const double gn2 = dot(gr, gr);
  if (gn2 == 0.0) return false;
  Vec dir = negate(gr);
  double a = std::min(step * 2.0, 1e6);
  if (const auto& cf = prob.closed_form(); cf && cf->hessian) {
    Vec h = cf->hessian(x);
    double tr = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i) tr += h[i * gr.size() + i];
    Vec z = solve_dense(std::move(h), dir, 1e-12 * (1.0 + std::abs(tr)));
    if (!z.empty() && dot(z, gr) < 0.0 && std::isfinite(euclidean_norm(z))) {
      dir = std::move(z);
      a = 1.0;
    }
  }
  const double slope = dot(dir, gr);
  while (a > 1e-20) {
    Vec cand = axpy(a, dir, x);
    const double gc = prob.g(cand);
    if (gc <= gx + 1e-4 * a * slope) {
      x = std::move(cand);
      gx = gc;
      step = a;
      return true;
    }
    a *= 0.5;
  }
  return false;
}

}  // namespace detail

/// Grid scan (exact discrete argmin, lowest index on ties) followed, for
/// closed forms with a gradient, by descent refinement to the gradient tolerance.
inline MinimisationReport minimise(const Problem& prob, const MinimiseOptions& opt = {}) {
  MinimisationReport rep;
  bool have = false;
  if (const auto& gf = prob.grid_function()) {
    const GridSpec& grid = gf->grid;
    Vec gvals(grid.size(), kInf);
    double best = kInf;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(gf->values[i])) continue;
      const Vec x = grid.point(i);
      gvals[i] = gf->values[i] - prob.phi()(x);
      if (gvals[i] < best) {
        best = gvals[i];
        best_i = i;
      }
    }
    rep.argmin = grid.point(best_i);
    rep.inf_value = best;
    rep.grid_index = best_i;
    rep.method = Method::grid_scan;
    const double tie_tol = 1e-12 * std::max(1.0, std::abs(best));
    for (std::size_t i = 0; i < grid.size() && rep.ties.size() < opt.max_ties; ++i)
      if (gvals[i] <= best + tie_tol) rep.ties.push_back(grid.point(i));

    if (grid.on_boundary(best_i)) {
      const auto idx = grid.unravel(best_i);
      for (std::size_t k = 0; k < idx.size() && !rep.divergence; ++k) {
        const bool low = idx[k] == 0, high = idx[k] + 1 == grid.axis(k).count;
        if (!low && !high) continue;
        auto inward = idx;
        inward[k] = low ? 1 : idx[k] - 1;
        const double gin = gvals[grid.ravel(inward)];
        if (gin > best) {
          DivergenceWitness w;
          w.point = rep.argmin;
          w.direction.assign(idx.size(), 0.0);
          w.direction[k] = low ? -1.0 : 1.0;
          w.decrease = gin - best;
          rep.divergence = std::move(w);
        }
      }
    }
    have = true;
  }

  if (prob.has_gradient() && !rep.divergence) {
    Vec x = have ? rep.argmin : Vec(prob.dim(), 0.0);
    double gx = prob.g(x);
    double step = 0.5;
    double gn = euclidean_norm(prob.grad_g(x));
    for (std::size_t it = 0; it < opt.max_iterations && gn > opt.gradient_tol; ++it) {
      if (!detail::armijo_step(prob, x, gx, step)) break;
      gn = euclidean_norm(prob.grad_g(x));
      if (euclidean_norm(x) > 1e8 || gx < -1e12) {
        DivergenceWitness w;
        w.point = x;
        w.direction = negate(prob.grad_g(x));
        w.decrease = kInf;
        rep.divergence = std::move(w);
        break;
      }
    }
    if (!have || gx <= rep.inf_value) {
      rep.argmin = x;
      rep.inf_value = gx;
    }
    rep.method = Method::descent;
    rep.gap_bound = gn;
    if (rep.ties.empty()) rep.ties.push_back(rep.argmin);
  }
  return rep;
}

// ---------------------------------------------------------------------------

enum class Strategy { descent, random_perturbed, adversarial_nullcone };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::descent: return "descent";
    case Strategy::random_perturbed: return "random-perturbed";
    case Strategy::adversarial_nullcone: return "adversarial-nullcone";
  }
  return "descent";
}

struct SequenceTrace {
  Strategy strategy = Strategy::descent;
  std::uint64_t seed = 0;
  std::vector<Vec> points;
  Vec values;
  Vec dist_conj;     // ||x - y_n|| = p-bar(y_n - x)
  Vec dist_primal;   // ||y_n - x|| = p(y_n - x)
  bool complete = false;  // reached inf g within the minimising tolerance
  std::string note;
};

struct GenOptions {
  std::size_t length = 100;
  double decay = 0.85;
  double scale = 0.5;
  double minimising_tol = 1e-6;
  double plateau_tol = 1e-9;
};

namespace detail {

inline Vec snap(const Problem& prob, Vec y) {
  if (prob.closed_form() || !prob.grid_function()) return y;
  const GridSpec& g = prob.grid_function()->grid;
  return g.point(g.nearest(y));
}

inline Vec grid_descent_step(const Problem& prob, const Vec& y) {
  const GridSpec& grid = prob.grid_function()->grid;
  const auto idx = grid.unravel(grid.nearest(y));
  const std::size_t n = idx.size();
  Vec best_pt = grid.point(grid.ravel(idx));
  double best = prob.g(best_pt);
  std::size_t combos = 1;
  for (std::size_t k = 0; k < n; ++k) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    auto nb = idx;
    std::size_t code = c;
    bool valid = true;
    for (std::size_t k = 0; k < n; ++k) {
      const int off = static_cast<int>(code % 3) - 1;
      code /= 3;
      const auto pos = static_cast<long long>(nb[k]) + off;
      if (pos < 0 || pos >= static_cast<long long>(grid.axis(k).count)) valid = false;
      else nb[k] = static_cast<std::size_t>(pos);
    }
    if (!valid) continue;
    const Vec p = grid.point(grid.ravel(nb));
    const double v = prob.g(p);
    if (v < best) {
      best = v;
      best_pt = p;
    }
  }
  return best_pt;
}

inline Vec nonneg_combination(const std::vector<Vec>& gens, std::size_t n, double length, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec w(n, 0.0);
  for (const Vec& gv : gens) {
    const double c = uni(rng);
    for (std::size_t i = 0; i < n; ++i) w[i] += c * gv[i];
  }
  const double len = euclidean_norm(w);
  if (len > 0.0)
    for (double& v : w) v *= length / len;
  return w;
}

inline SequenceTrace make_trace(const Problem& prob, const MinimisationReport& rep, Strategy strategy,
                                std::uint64_t seed, const GenOptions& opt) {
  Rng rng(seed);
  const std::size_t n = prob.dim();
  const Vec& x = rep.argmin;
  SequenceTrace tr;
  tr.strategy = strategy;
  tr.seed = seed;

  switch (strategy) {
    case Strategy::descent: {
      Vec y = snap(prob, axpy(2.0 * opt.scale, uniform_vector(n, -1.0, 1.0, rng), x));
      if (prob.has_gradient()) {
        double gy = prob.g(y);
        double step = 0.5;
        for (std::size_t i = 0; i < opt.length; ++i) {
          tr.points.push_back(y);
          armijo_step(prob, y, gy, step);
        }
      } else if (prob.grid_function()) {
        for (std::size_t i = 0; i < opt.length; ++i) {
          tr.points.push_back(y);
          y = grid_descent_step(prob, y);
        }
      } else {
        throw std::logic_error("gen_minimising_sequences: descent needs a gradient or a grid");
      }
      break;
    }
    case Strategy::random_perturbed: {
      Vec target = x;
      if (!prob.closed_form() && rep.ties.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, rep.ties.size() - 1);
        target = rep.ties[pick(rng)];
      }
      double amp = opt.scale;
      for (std::size_t i = 0; i < opt.length; ++i) {
        tr.points.push_back(snap(prob, axpy(amp, uniform_vector(n, -1.0, 1.0, rng), target)));
        amp *= opt.decay;
      }
      break;
    }
    case Strategy::adversarial_nullcone: {
      const auto invisible = null_directions(prob.norm(), Side::conjugate, 2, derive_seed(seed, 1));
      const auto visible_free = null_directions(prob.norm(), Side::primal, 2, derive_seed(seed, 2));
      // largest plateau step along a p-bar-null direction that keeps g at its infimum
      Vec shift(n, 0.0);
      double shift_len = 0.0;
      const double ptol = opt.plateau_tol * std::max(1.0, std::abs(rep.inf_value));
      for (const Vec& u : invisible) {
        for (double c : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
          if (c <= shift_len) break;
          const Vec cand = snap(prob, axpy(c, u, x));
          if (prob.g(cand) - rep.inf_value <= ptol) {
            shift = subtract(cand, x);
            shift_len = c;
            break;
          }
        }
      }
      std::vector<Vec> gens = invisible;
      gens.insert(gens.end(), visible_free.begin(), visible_free.end());
      if (gens.empty()) tr.note = "no null directions; uniform noise used";
      if (shift_len == 0.0) tr.note += tr.note.empty() ? "no plateau along null directions" : "; no plateau";
      double amp = opt.scale;
      for (std::size_t i = 0; i < opt.length; ++i) {
        const Vec w = gens.empty() ? uniform_vector(n, -amp, amp, rng) : nonneg_combination(gens, n, amp, rng);
        Vec y = axpy(1.0, shift, x);
        tr.points.push_back(snap(prob, axpy(1.0, w, y)));
        amp *= opt.decay;
      }
      break;
    }
  }

  for (const Vec& y : tr.points) {
    const Vec d = subtract(y, x);
    tr.values.push_back(prob.g(y));
    tr.dist_conj.push_back(prob.norm().conjugate(d));
    tr.dist_primal.push_back(prob.norm()(d));
  }
  const double last = tr.values.back();
  tr.complete = std::isfinite(last) && last - rep.inf_value <= opt.minimising_tol;
  if (!tr.complete) tr.note += tr.note.empty() ? "did not reach inf g" : "; did not reach inf g";
  return tr;
}

}  // namespace detail

/// `count` independent traces of one strategy, generated concurrently;
/// trace j uses derive_seed(seed, j) and results keep that order.
inline std::vector<SequenceTrace> gen_minimising_sequences(const Problem& prob, const MinimisationReport& rep,
                                                           Strategy strategy, std::size_t count,
                                                           std::uint64_t seed, const GenOptions& opt = {}) {
  if (!std::isfinite(rep.inf_value)) throw std::invalid_argument("gen_minimising_sequences: inf g not finite");
  if (opt.length < 3) throw std::invalid_argument("gen_minimising_sequences: length must be >= 3");
  std::vector<std::future<SequenceTrace>> jobs;
  jobs.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const std::uint64_t s = derive_seed(seed, 1000 * static_cast<std::uint64_t>(strategy) + j);
    jobs.push_back(std::async(std::launch::async, [&prob, &rep, strategy, s, &opt] {
      return detail::make_trace(prob, rep, strategy, s, opt);
    }));
  }
  std::vector<SequenceTrace> out;
  out.reserve(count);
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// A trace whose element stays at x. Minimising by construction.
inline SequenceTrace constant_trace(const Problem& prob, const MinimisationReport& rep, std::size_t length = 10) {
  SequenceTrace tr;
  tr.points.assign(length, rep.argmin);
  tr.values.assign(length, prob.g(rep.argmin));
  tr.dist_conj.assign(length, 0.0);
  tr.dist_primal.assign(length, 0.0);
  tr.complete = true;
  tr.note = "constant";
  return tr;
}

enum class Mode { frechet, gateaux };

inline std::string to_string(Mode m) { return m == Mode::frechet ? "frechet" : "gateaux"; }

/// Every minimising trace must converge to x: in p-bar (frechet mode) or
/// weakly against a sample of the conjugate dual cone (gateaux mode).
inline bool check_statement_ii(const Problem& prob, const MinimisationReport& rep,
                               std::span<const SequenceTrace> traces, Mode mode, const Tolerances& tol = {},
                               const TailWindow& window = {}) {
  std::vector<const SequenceTrace*> minimising;
  for (const auto& t : traces)
    if (t.complete && t.values.back() - rep.inf_value <= tol.minimising) minimising.push_back(&t);
  if (minimising.empty()) throw std::invalid_argument("check_statement_ii: no minimising traces supplied");

  if (mode == Mode::frechet) {
    for (const auto* t : minimising)
      if (tail_max(t->dist_conj, window) > tol.converge) return false;
    return true;
  }
  const auto duals = sample_dual_cone(prob.norm(), Side::conjugate, 2 * prob.dim() + 6, 7);
  WeakOptions wopt;
  wopt.window = window;
  wopt.tol = tol.converge;
  for (const auto* t : minimising) {
    if (t->points.size() < 3) continue;
    for (const auto& v : weak_limsup_test(prob.norm(), Side::conjugate, t->points, rep.argmin, duals, wopt))
      if (!v.converges) return false;
  }
  return true;
}

struct StatementIII {
  bool holds = false;
  Vec evaluated_at;
  bool snapped = false;      // x replaced by its nearest grid point
  std::string route;         // "grid-biconjugate" or "conjugate-identity"
  double f_value = 0.0;
  double biconjugate_value = 0.0;
};

/// f(x) finite and f**(x) = f(x) within the grid tolerance. With a dual grid,
/// f** is the second discrete conjugate restricted to the conjugate dual cone;
/// without one, f**(x) >= <phi, x> - f*(phi) together with f** <= f is used.
inline StatementIII check_statement_iii(const Problem& prob, const MinimisationReport& rep,
                                        const Tolerances& tol = {}) {
  StatementIII out;
  Vec x = rep.argmin;
  if (prob.grid_function()) {
    const GridSpec& g = prob.grid_function()->grid;
    const Vec snapped = g.point(g.nearest(x));
    out.snapped = snapped != x;
    x = snapped;
  }
  out.evaluated_at = x;
  out.f_value = prob.grid_function() ? prob.grid_function()->nearest_value(x) : prob.f(x);
  if (!std::isfinite(out.f_value)) return out;

  if (const auto& dual = prob.dual_grid()) {
    out.route = "grid-biconjugate";
    GridFn fstar;
    if (prob.grid_function()) {
      fstar = conjugate_fast(*prob.grid_function(), *dual, prob.cone_mask());
    } else {
      Vec vals(dual->size());
      for (std::size_t i = 0; i < dual->size(); ++i) vals[i] = prob.f_conjugate(dual->point(i));
      fstar = GridFn(*dual, std::move(vals));
    }
    out.biconjugate_value = conjugate_at(fstar, x);
  } else {
    out.route = "conjugate-identity";
    out.biconjugate_value = std::min(out.f_value, prob.phi()(x) - prob.f_conjugate(prob.phi().coeffs));
  }
  out.holds = std::abs(out.f_value - out.biconjugate_value) <= tol.grid;
  return out;
}

struct HarnessOptions {
  std::uint64_t seed = 1;
  std::size_t traces_per_strategy = 2;
  GenOptions gen{};
  Tolerances tol{};
  FrechetOptions frechet{};
  std::size_t gateaux_directions = 10;
};

struct TheoremVerdict {
  Mode mode = Mode::frechet;
  MinimisationReport minimum;
  std::vector<SequenceTrace> traces;
  bool statement_ii = false;
  StatementIII statement_iii;
  std::optional<FrechetResult> frechet_evidence;
  std::vector<DerivativeEstimate> gateaux_evidence;
  std::vector<double> gateaux_errors;
  bool evidence_gathered = false;
  bool evidence_consistent = false;
  std::vector<std::string> diagnostics;
};

/// The norm on the conjugate dual cone used for Frechet spheres.
inline ScalarField dual_sphere_norm(const AsymNorm& norm) {
  if (norm.builtin())
    return [norm](std::span<const double> psi) {
      return dual_norm(norm, Functional{Vec(psi.begin(), psi.end())}, Side::conjugate);
    };
  return [norm](std::span<const double> psi) { return norm.conjugate(psi); };
}

/// Runs minimisation, all trace strategies, (ii) and (iii); for convex f with
/// (ii) verified, collects (i)-evidence on f* at phi with candidate derivative x.
/// Failed implications are recorded as diagnostics, never as counterexamples.
inline TheoremVerdict theorem_harness(const Problem& prob, Mode mode, const HarnessOptions& opt = {}) {
  TheoremVerdict v;
  v.mode = mode;
  v.minimum = minimise(prob);
  const Vec& x = v.minimum.argmin;
  if (v.minimum.divergence) {
    v.diagnostics.push_back("infimum not attained inside the grid: boundary divergence witness");
    v.statement_iii = check_statement_iii(prob, v.minimum, opt.tol);
    return v;
  }

  for (Strategy s : {Strategy::descent, Strategy::random_perturbed, Strategy::adversarial_nullcone}) {
    auto tr = gen_minimising_sequences(prob, v.minimum, s, opt.traces_per_strategy, opt.seed, opt.gen);
    v.traces.insert(v.traces.end(), std::make_move_iterator(tr.begin()), std::make_move_iterator(tr.end()));
  }
  v.traces.push_back(constant_trace(prob, v.minimum));
  v.statement_ii = check_statement_ii(prob, v.minimum, v.traces, mode, opt.tol);
  v.statement_iii = check_statement_iii(prob, v.minimum, opt.tol);
  if (v.statement_ii && !v.statement_iii.holds)
    v.diagnostics.push_back("(ii) verified but (iii) failed at grid tolerance: discretization effect");

  if (prob.convex() && v.statement_ii) {
    v.evidence_gathered = true;
    const ScalarField fstar = [&prob](std::span<const double> y) { return prob.f_conjugate(y); };
    const Vec& phi = prob.phi().coeffs;
    if (mode == Mode::frechet) {
      FrechetOptions fo = opt.frechet;
      if (!fo.cone) fo.cone = prob.cone_mask();
      fo.tol = opt.tol.frechet;
      v.frechet_evidence = right_frechet_check(fstar, phi, x, dual_sphere_norm(prob.norm()), fo);
      v.evidence_consistent = v.frechet_evidence->verdict == FrechetVerdict::consistent;
    } else {
      const auto dirs = sample_dual_cone(prob.norm(), Side::conjugate, opt.gateaux_directions, opt.seed);
      const Vec sched = default_schedule();
      v.evidence_consistent = !dirs.empty();
      for (const auto& psi : dirs) {
        auto est = right_gateaux_estimate(fstar, phi, psi.coeffs, sched);
        const double err = std::abs(est.extrapolated - psi(x));
        v.gateaux_errors.push_back(err);
        v.evidence_consistent = v.evidence_consistent && err <= opt.tol.gateaux;
        v.gateaux_evidence.push_back(std::move(est));
      }
    }
    if (!v.evidence_consistent)
      v.diagnostics.push_back("convex f with (ii) verified but (i)-evidence outside tolerance: discretization effect");
  }
  return v;
}

// ---------------------------------------------------------------------------

struct ModulusOptions {
  std::size_t starts = 32;
  std::uint64_t seed = 3;
  std::size_t max_evals_per_start = 4000;
  double min_step = 1e-7;
};

/// alpha(t) = inf over p-bar(y) = t of h(y) = g(x + y) - inf g, by projected
/// compass search from seeded starts; alpha(0) = 0.
inline GaugeFn wellposedness_modulus(const Problem& prob, const MinimisationReport& rep,
                                     std::span<const double> t_samples, const ModulusOptions& opt = {}) {
  if (rep.divergence) throw std::invalid_argument("wellposedness_modulus: minimiser not attained");
  const std::size_t n = prob.dim();
  const Vec& x = rep.argmin;
  const AsymNorm& norm = prob.norm();

  Rng rng(opt.seed);
  std::vector<Vec> starts;
  for (std::size_t a = 0; a < 100 * opt.starts && starts.size() < opt.starts; ++a) {
    Vec u = gaussian_vector(n, rng);
    if (norm.conjugate(u) > 1e-12) starts.push_back(std::move(u));
  }
  if (starts.empty()) throw std::domain_error("wellposedness_modulus: p-bar sphere is empty");

  Vec t(t_samples.begin(), t_samples.end());
  Vec alpha(t.size(), 0.0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] == 0.0) continue;
    const double tk = t[k];
    auto h = [&](const Vec& u) {
      const double pu = norm.conjugate(u);
      if (!(pu > 1e-12)) return kInf;
      Vec y = u;
      for (double& v : y) v *= tk / pu;
      return std::max(0.0, prob.g(axpy(1.0, y, x)) - rep.inf_value);
    };
    double best_all = kInf;
    for (const Vec& s : starts) {
      Vec u = s;
      double len = euclidean_norm(u);
      for (double& v : u) v /= len;
      double best = h(u);
      double step = 0.5;
      std::size_t evals = 1;
      while (step > opt.min_step && evals < opt.max_evals_per_start) {
        bool improved = false;
        for (std::size_t i = 0; i < n && !improved; ++i) {
          for (double sgn : {1.0, -1.0}) {
            Vec c = u;
            c[i] += sgn * step;
            len = euclidean_norm(c);
            if (len == 0.0) continue;
            for (double& v : c) v /= len;
            const double val = h(c);
            ++evals;
            if (val < best) {
              best = val;
              u = std::move(c);
              improved = true;
              break;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      best_all = std::min(best_all, best);
    }
    alpha[k] = best_all;
  }
  return GaugeFn(std::move(t), std::move(alpha));
}

struct CoercivityBound {
  bool holds = false;
  double min_slack = kInf;  // min over grid of g(y) - alpha#(p-bar(y - x)) - inf g
  Vec worst_point;
};

/// g(y) >= alpha#(p-bar(y - x)) + inf g - tol at every point of the problem grid.
inline CoercivityBound coercivity_bound_check(const Problem& prob, const MinimisationReport& rep,
                                              const GaugeFn& alpha, double tol) {
  if (!prob.grid_function()) throw std::invalid_argument("coercivity_bound_check: problem has no grid");
  const GridSpec& grid = prob.grid_function()->grid;
  CoercivityBound out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec y = grid.point(i);
    const double gy = prob.g(y);
    if (!std::isfinite(gy)) continue;
    const double slack = gy - gauge_conjugate_at(alpha, prob.norm().conjugate(subtract(y, rep.argmin))) - rep.inf_value;
    if (slack < out.min_slack) {
      out.min_slack = slack;
      out.worst_point = y;
    }
  }
  out.holds = out.min_slack >= -tol;
  return out;
}

inline std::string modulus_csv(const GaugeFn& alpha) {
  const GaugeFn sharp = gauge_conjugate(alpha, alpha.t);
  std::ostringstream os;
  os.precision(17);
  os << "t,alpha,alpha_sharp\n";
  for (std::size_t i = 0; i < alpha.t.size(); ++i)
    os << alpha.t[i] << ',' << alpha.values[i] << ',' << sharp.values[i] << '\n';
  return os.str();
}

inline nlohmann::json trace_to_json(const SequenceTrace& t) {
  return {{"strategy", to_string(t.strategy)}, {"seed", t.seed},       {"points", t.points},
          {"values", t.values},                {"dist_conj", t.dist_conj}, {"dist_primal", t.dist_primal},
          {"complete", t.complete},            {"note", t.note}};
}

inline nlohmann::json verdict_to_json(const TheoremVerdict& v) {
  nlohmann::json j;
  j["mode"] = to_string(v.mode);
  j["argmin"] = v.minimum.argmin;
  j["inf"] = v.minimum.inf_value;
  j["method"] = to_string(v.minimum.method);
  j["divergence"] = static_cast<bool>(v.minimum.divergence);
  j["statement_ii"] = v.statement_ii;
  j["statement_iii"] = {{"holds", v.statement_iii.holds},
                        {"route", v.statement_iii.route},
                        {"f", v.statement_iii.f_value},
                        {"f_biconjugate", v.statement_iii.biconjugate_value},
                        {"snapped", v.statement_iii.snapped}};
  j["evidence_gathered"] = v.evidence_gathered;
  j["evidence_consistent"] = v.evidence_consistent;
  if (v.frechet_evidence) {
    j["remainder"] = {{"t", v.frechet_evidence->curve.radii},
                      {"r", v.frechet_evidence->curve.remainder},
                      {"verdict", to_string(v.frechet_evidence->verdict)}};
  }
  if (!v.gateaux_errors.empty()) j["gateaux_errors"] = v.gateaux_errors;
  nlohmann::json traces = nlohmann::json::array();
  for (const auto& t : v.traces) traces.push_back(trace_to_json(t));
  j["traces"] = std::move(traces);
  j["diagnostics"] = v.diagnostics;
  return j;
}

}  // namespace asymwp
