#pragma once

// Cumulant-generating function of a finite probability space with mean-zero
// atoms. Coefficients a in R^d define T = A a (T_i = <a, atom_i>), so K(mu) is
// the column span of the feature matrix A and L(mu) is all of R^k.

#include <Eigen/Dense>

#include "asymwp/wellposed.hpp"

namespace asymwp::cgf {

struct Model {
  std::vector<Vec> atoms;  // k points in R^d
  Vec weights;             // mu_i > 0, summing to one

  std::size_t k() const noexcept { return atoms.size(); }
  std::size_t d() const noexcept { return atoms.empty() ? 0 : atoms.front().size(); }

  Eigen::MatrixXd features() const {
    Eigen::MatrixXd a(k(), d());
    for (std::size_t i = 0; i < k(); ++i)
      for (std::size_t j = 0; j < d(); ++j) a(i, j) = atoms[i][j];
    return a;
  }
};

struct ModelCertificate {
  bool valid = false;
  std::string message;
  double mean_residual = 0.0;      // max_j |sum_i mu_i atom_ij|
  double weight_sum_error = 0.0;
  double constant_residual = 0.0;  // least-squares distance of the ones vector from K(mu), per sqrt(k)
  bool duplicate_atoms = false;
  std::size_t rank = 0;
};

class InvalidModel : public std::invalid_argument {
 public:
  InvalidModel(const std::string& what, ModelCertificate cert)
      : std::invalid_argument(what), certificate(std::move(cert)) {}
  ModelCertificate certificate;
};

class NonCoercive : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kMeanTol = 1e-12;
inline constexpr double kConstantTol = 1e-8;

/// Computes every residual; never throws on bad data, only records it.
inline ModelCertificate certify_model(const Model& m) {
  ModelCertificate c;
  auto fail = [&c](std::string msg) {
    if (c.message.empty()) c.message = std::move(msg);
    c.valid = false;
  };
  c.valid = true;
  if (m.k() < 2) fail("need at least two atoms");
  if (m.d() == 0) fail("atoms must have positive dimension");
  if (m.weights.size() != m.k()) fail("weights and atoms differ in length");
  for (const Vec& a : m.atoms) {
    if (a.size() != m.d()) fail("atoms have inconsistent dimensions");
    for (double v : a)
      if (!std::isfinite(v)) fail("non-finite atom coordinate");
  }
  if (!c.valid) return c;
  double sum = 0.0;
  for (double w : m.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) fail("weights must be positive and finite");
    sum += w;
  }
  c.weight_sum_error = std::abs(sum - 1.0);
  if (c.weight_sum_error > kMeanTol * static_cast<double>(m.k())) fail("weights must sum to one");
  for (std::size_t j = 0; j < m.d(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.k(); ++i) s += m.weights[i] * m.atoms[i][j];
    c.mean_residual = std::max(c.mean_residual, std::abs(s));
  }
  if (c.mean_residual > kMeanTol) fail("atoms are not of mean zero");
  for (std::size_t i = 0; i < m.k() && !c.duplicate_atoms; ++i)
    for (std::size_t j = i + 1; j < m.k(); ++j)
      if (m.atoms[i] == m.atoms[j]) c.duplicate_atoms = true;

  const Eigen::MatrixXd a = m.features();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  c.rank = static_cast<std::size_t>(qr.rank());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m.k()));
  const Eigen::VectorXd fit = a * qr.solve(ones);
  c.constant_residual = (ones - fit).norm() / std::sqrt(static_cast<double>(m.k()));
  if (c.constant_residual < kConstantTol) fail("constants lie in the feature span");
  return c;
}

inline ModelCertificate validate_model(const Model& m) {
  ModelCertificate c = certify_model(m);
  if (!c.valid) throw InvalidModel("invalid cgf model: " + c.message, c);
  return c;
}

inline Vec features_apply(const Model& m, std::span<const double> a) {
  require_dim(a, m.d(), "cgf coefficients");
  require_finite(a, "cgf coefficients");
  Vec t(m.k(), 0.0);
  for (std::size_t i = 0; i < m.k(); ++i) t[i] = dot(m.atoms[i], a);
  return t;
}

/// ln sum_i mu_i exp(T_i) with a max shift; defined for every T in R^k.
inline double log_mgf(const Model& m, std::span<const double> t) {
  require_dim(t, m.k(), "log_mgf");
  double top = -kInf;
  for (std::size_t i = 0; i < m.k(); ++i) top = std::max(top, t[i] + std::log(m.weights[i]));
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) s += std::exp(t[i] + std::log(m.weights[i]) - top);
  return top + std::log(s);
}

/// Tilted probabilities proportional to mu_i exp(T_i).
inline Vec gibbs_weights(const Model& m, std::span<const double> t) {
  const double lz = log_mgf(m, t);
  Vec w(m.k());
  for (std::size_t i = 0; i < m.k(); ++i) w[i] = std::exp(t[i] + std::log(m.weights[i]) - lz);
  return w;
}

inline double cgf_value(const Model& m, std::span<const double> a) { return log_mgf(m, features_apply(m, a)); }

/// Gibbs mean of the atoms.
inline Vec cgf_gradient(const Model& m, std::span<const double> a) {
  const Vec w = gibbs_weights(m, features_apply(m, a));
  Vec g(m.d(), 0.0);
  for (std::size_t i = 0; i < m.k(); ++i)
    for (std::size_t j = 0; j < m.d(); ++j) g[j] += w[i] * m.atoms[i][j];
  return g;
}

/// Gibbs covariance of the atoms (d x d, symmetric positive semidefinite).
inline Eigen::MatrixXd cgf_hessian(const Model& m, std::span<const double> a) {
  const Vec w = gibbs_weights(m, features_apply(m, a));
  const Vec mean = cgf_gradient(m, a);
  const auto d = static_cast<Eigen::Index>(m.d());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < m.k(); ++i) {
    Eigen::VectorXd c(d);
    for (Eigen::Index j = 0; j < d; ++j) c(j) = m.atoms[i][static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)];
    h.noalias() += w[i] * c * c.transpose();
  }
  return 0.5 * (h + h.transpose());
}

/// Distance of T from K(mu) after least squares, in the max norm.
inline double span_residual(const Model& m, std::span<const double> t) {
  require_dim(t, m.k(), "span_residual");
  const Eigen::MatrixXd a = m.features();
  const Eigen::Map<const Eigen::VectorXd> tv(t.data(), static_cast<Eigen::Index>(t.size()));
  const Eigen::VectorXd fit = a * a.colPivHouseholderQr().solve(tv);
  return (tv - fit).cwiseAbs().maxCoeff();
}

/// W_mu: the log-mgf on K(mu), +inf off it.
inline double w_value(const Model& m, std::span<const double> t, double span_tol = 1e-8) {
  double scale = 1.0;
  for (double v : t) scale = std::max(scale, std::abs(v));
  if (span_residual(m, t) > span_tol * scale) return kInf;
  return log_mgf(m, t);
}

/// sum_i mu_i max(-T_i, 0).
inline double p_measure(const Model& m, std::span<const double> t) {
  require_dim(t, m.k(), "p_measure");
  double s = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) s += m.weights[i] * std::max(-t[i], 0.0);
  return s;
}

inline double pbar_measure(const Model& m, std::span<const double> t) { return p_measure(m, negate(t)); }

inline double l1_measure(const Model& m, std::span<const double> t) {
  require_dim(t, m.k(), "l1_measure");
  double s = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) s += m.weights[i] * std::abs(t[i]);
  return s;
}

inline void require_dual_cone(const Model& m, std::span<const double> y) {
  require_dim(y, m.k(), "cgf y");
  require_finite(y, "cgf y");
  for (double v : y)
    if (v < 0.0) throw NotInDualCone("cgf: y must be nonnegative");
}

// ---------------------------------------------------------------------------

struct CoercivityReport {
  Vec y;
  double epsilon_star = 0.0;  // coercive for exactly the eps in [0, epsilon_star)
  Vec worst_direction;        // coefficient direction attaining epsilon_star
  std::vector<std::pair<double, bool>> verdicts;
  std::optional<double> largest_passing;
  bool coercive = false;
  std::string method;  // "extreme-rays" or "sampled"
  std::size_t rays = 0;
};

namespace detail {

// (max_i T_i - <y, T>) / ||T||_L1, the growth rate of W - y per unit of L1 norm along u.
inline double growth_ratio(const Model& m, std::span<const double> y, std::span<const double> u) {
  const Vec t = features_apply(m, u);
  const double l1 = l1_measure(m, t);
  if (l1 < 1e-14) return kInf;
  return (*std::max_element(t.begin(), t.end()) - dot(y, t)) / l1;
}

inline std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  double c = 1.0;
  for (std::size_t i = 0; i < r; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return static_cast<std::size_t>(std::llround(std::min(c, 1e18)));
}

}  // namespace detail

/// Exact ray test: both numerator and denominator of the growth ratio are
/// linear on each cell of the arrangement {T_i = T_j} u {T_i = 0}, so the
/// minimum over directions sits on a cell's extreme ray.
inline CoercivityReport coercivity_check(const Model& m, std::span<const double> y,
                                         std::span<const double> epsilons, std::size_t combo_cap = 200000) {
  require_dual_cone(m, y);
  CoercivityReport rep;
  rep.y.assign(y.begin(), y.end());
  const std::size_t d = m.d();

  std::vector<Vec> rays;
  if (d == 1) {
    rays = {{1.0}, {-1.0}};
    rep.method = "extreme-rays";
  } else {
    std::vector<Vec> normals;
    for (std::size_t i = 0; i < m.k(); ++i) {
      if (euclidean_norm(m.atoms[i]) > 1e-12) normals.push_back(m.atoms[i]);
      for (std::size_t j = i + 1; j < m.k(); ++j) {
        Vec diff = subtract(m.atoms[i], m.atoms[j]);
        if (euclidean_norm(diff) > 1e-12) normals.push_back(std::move(diff));
      }
    }
    const std::size_t r = d - 1;
    if (detail::binomial(normals.size(), r) <= combo_cap) {
      rep.method = "extreme-rays";
      std::vector<std::size_t> pick(r);
      for (std::size_t i = 0; i < r; ++i) pick[i] = i;
      while (true) {
        Eigen::MatrixXd mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < d; ++j)
            mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = normals[pick[i]][j];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(mat);
        lu.setThreshold(1e-10);
        if (static_cast<std::size_t>(lu.rank()) == r) {
          const Eigen::VectorXd v = lu.kernel().col(0).normalized();
          Vec u(v.data(), v.data() + v.size());
          rays.push_back(negate(u));
          rays.push_back(std::move(u));
        }
        // next combination in lexicographic order
        std::size_t i = r;
        while (i > 0 && pick[i - 1] == normals.size() - r + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
      }
    } else {
      rep.method = "sampled";
      Rng rng(11);
      for (std::size_t s = 0; s < 20000; ++s) rays.push_back(gaussian_vector(d, rng));
    }
  }

  rep.epsilon_star = kInf;
  for (const Vec& u : rays) {
    const double ratio = detail::growth_ratio(m, y, u);
    if (ratio < rep.epsilon_star) {
      rep.epsilon_star = ratio;
      rep.worst_direction = u;
    }
  }
  rep.rays = rays.size();
  rep.coercive = rep.epsilon_star > 1e-12;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) throw std::invalid_argument("coercivity_check: epsilons must be nonnegative");
    const bool ok = eps < rep.epsilon_star - 1e-12;
    rep.verdicts.emplace_back(eps, ok);
    if (ok && (!rep.largest_passing || eps > *rep.largest_passing)) rep.largest_passing = eps;
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct SolveOptions {
  std::size_t starts = 4;
  std::uint64_t seed = 17;
  double start_scale = 2.0;
  double gradient_tol = 1e-10;
  std::size_t max_iterations = 500;
};

struct NewtonResult {
  Vec a;
  double objective = 0.0;  // V(a) - <b, a>
  double gradient_norm = kInf;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
};

namespace detail {

// Damped Newton for min_a V(a) - <b, a>; the Hessian is the Gibbs covariance.
inline NewtonResult newton_minimise(const Model& m, std::span<const double> b, Vec a, const SolveOptions& opt) {
  const auto d = static_cast<Eigen::Index>(m.d());
  auto objective = [&](const Vec& x) { return cgf_value(m, x) - dot(b, x); };
  auto gradient = [&](const Vec& x) { return subtract(cgf_gradient(m, x), b); };
  NewtonResult res;
  double fx = objective(a);
  Vec g = gradient(a);
  double gn = euclidean_norm(g);
  std::size_t it = 0;
  for (; it < opt.max_iterations && gn > opt.gradient_tol; ++it) {
    Eigen::MatrixXd h = cgf_hessian(m, a);
    h.diagonal().array() += 1e-14 * (1.0 + h.trace());
    const Eigen::Map<const Eigen::VectorXd> gv(g.data(), d);
    Eigen::VectorXd dir = h.ldlt().solve(-gv);
    if (!dir.allFinite() || dir.dot(gv) >= 0.0) dir = -gv;
    const Vec step(dir.data(), dir.data() + d);
    const double slope = dir.dot(gv);
    double s = 1.0;
    bool moved = false;
    while (s > 1e-30) {
      Vec cand = axpy(s, step, a);
      const double fc = objective(cand);
      const Vec gc = gradient(cand);
      const double gcn = euclidean_norm(gc);
      // near the optimum objective differences drown in rounding; fall back on the gradient
      if (fc <= fx + 1e-4 * s * slope || (gn < 1e-6 && gcn < gn)) {
        a = std::move(cand);
        fx = fc;
        g = gc;
        gn = gcn;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
    if (euclidean_norm(a) > 1e6) {
      res.diverged = true;
      break;
    }
  }
  res.a = std::move(a);
  res.objective = fx;
  res.gradient_norm = gn;
  res.iterations = it;
  res.converged = !res.diverged && gn <= opt.gradient_tol;
  return res;
}

inline Vec linear_term(const Model& m, std::span<const double> y) {
  Vec b(m.d(), 0.0);
  for (std::size_t i = 0; i < m.k(); ++i)
    for (std::size_t j = 0; j < m.d(); ++j) b[j] += y[i] * m.atoms[i][j];
  return b;
}

inline std::vector<NewtonResult> multi_start(const Model& m, std::span<const double> y, std::size_t starts,
                                             std::uint64_t seed, const SolveOptions& opt) {
  const Vec b = linear_term(m, y);
  Rng rng(seed);
  std::vector<NewtonResult> out;
  for (std::size_t s = 0; s < starts; ++s) {
    Vec a0 = s == 0 ? Vec(m.d(), 0.0) : gaussian_vector(m.d(), rng);
    if (s > 0)
      for (double& v : a0) v *= opt.start_scale;
    out.push_back(newton_minimise(m, b, std::move(a0), opt));
  }
  return out;
}

}  // namespace detail

struct ConjugateReport {
  Vec y;
  std::optional<double> value;  // W*(y); empty when y is not coercive
  Vec T;                        // maximiser in K(mu), length k
  Vec a;                        // its coefficients
  double gradient_norm = kInf;
  std::size_t iterations = 0;
  std::size_t starts = 0;
  double start_spread = 0.0;  // max |T_s - T_0| over starts
  CoercivityReport coercivity;
  std::string status;  // "converged", "non-coercive", "not-converged"
};

/// W*(y) = sup_a [<y, A a> - V(a)] by damped Newton from several starts.
inline ConjugateReport cgf_conjugate(const Model& m, std::span<const double> y, const SolveOptions& opt = {}) {
  ConjugateReport rep;
  rep.y.assign(y.begin(), y.end());
  const double eps[] = {0.0};
  rep.coercivity = coercivity_check(m, y, eps);
  if (!rep.coercivity.coercive) {
    rep.status = "non-coercive";
    return rep;
  }
  const auto runs = detail::multi_start(m, y, std::max<std::size_t>(1, opt.starts), opt.seed, opt);
  const NewtonResult& best = *std::min_element(runs.begin(), runs.end(), [](const auto& l, const auto& r) {
    return l.gradient_norm < r.gradient_norm;
  });
  rep.a = best.a;
  rep.T = features_apply(m, best.a);
  rep.gradient_norm = best.gradient_norm;
  rep.iterations = best.iterations;
  rep.starts = runs.size();
  for (const auto& r : runs) {
    const Vec t = features_apply(m, r.a);
    for (std::size_t i = 0; i < t.size(); ++i) rep.start_spread = std::max(rep.start_spread, std::abs(t[i] - rep.T[i]));
  }
  bool all = true;
  for (const auto& r : runs) all = all && r.converged;
  rep.status = all && rep.start_spread <= 1e-6 ? "converged" : "not-converged";
  rep.value = -best.objective;
  return rep;
}

struct TiltedMinimiser {
  Vec S;  // base minimiser of W - y in K(mu)
  Vec a;
  double interval_lo = 0.0;  // I = [lo, hi], the constants c with S + c also minimal
  double interval_hi = 0.0;
  Vec T;  // S + sup I
  std::vector<Vec> start_minimisers;
  double max_disagreement = 0.0;  // after removing the constant mode
  double max_gibbs_variance = 0.0;
  bool agree = false;
  std::vector<std::string> diagnostics;
};

/// T = S + c for the selected constant c.
inline Vec shift_by_constant(std::span<const double> s, double c) {
  Vec t(s.begin(), s.end());
  for (double& v : t) v += c;
  return t;
}

/// Multi-start minimisation of W - y over K(mu). The minimisers differ by
/// constants at most; constants are excluded from K(mu) so I = {0}.
inline TiltedMinimiser tilted_minimise(const Model& m, std::span<const double> y, std::size_t starts = 16,
                                       std::uint64_t seed = 1, const SolveOptions& opt = {}) {
  const ModelCertificate cert = validate_model(m);
  require_dual_cone(m, y);
  const double eps[] = {0.0};
  if (!coercivity_check(m, y, eps).coercive) throw NonCoercive("tilted_minimise: W - y is not coercive");

  const auto runs = detail::multi_start(m, y, std::max<std::size_t>(1, starts), seed, opt);
  TiltedMinimiser out;
  std::size_t base = 0;
  for (std::size_t s = 1; s < runs.size(); ++s)
    if (runs[s].objective < runs[base].objective) base = s;
  out.a = runs[base].a;
  out.S = features_apply(m, out.a);
  const Vec w = gibbs_weights(m, out.S);
  bool all_converged = true;
  for (const auto& r : runs) {
    all_converged = all_converged && r.converged;
    Vec t = features_apply(m, r.a);
    Vec diff = subtract(t, out.S);
    double c = 0.0;
    for (std::size_t i = 0; i < m.k(); ++i) c += m.weights[i] * diff[i];
    double mean_w = 0.0, second_w = 0.0;
    for (std::size_t i = 0; i < m.k(); ++i) {
      out.max_disagreement = std::max(out.max_disagreement, std::abs(diff[i] - c));
      mean_w += w[i] * diff[i];
      second_w += w[i] * diff[i] * diff[i];
    }
    out.max_gibbs_variance = std::max(out.max_gibbs_variance, std::max(0.0, second_w - mean_w * mean_w));
    out.start_minimisers.push_back(std::move(t));
  }
  if (!all_converged) out.diagnostics.push_back("some starts did not reach the gradient tolerance");
  out.agree = out.max_disagreement <= 1e-6;
  if (!out.agree) out.diagnostics.push_back("multi-start minimisers disagree beyond the constant mode");

  if (cert.constant_residual >= kConstantTol) {
    out.interval_lo = 0.0;
    out.interval_hi = 0.0;
  } else {
    throw std::logic_error("tilted_minimise: constants in K(mu) for a validated model");
  }
  out.T = shift_by_constant(out.S, out.interval_hi);
  return out;
}

struct PbarWeakResult {
  std::vector<WeakVerdict> coordinates;
  bool converges = false;
};

/// p-bar-weak convergence on L(mu): the dual cone is the nonnegative vectors,
/// so it suffices that limsup (T_n,i - T_i) <= tol on each atom of positive mass.
inline PbarWeakResult pbar_weak_check(const Model& m, std::span<const Vec> trace, std::span<const double> limit,
                                      double tol = 1e-3, const TailWindow& window = {}) {
  if (trace.size() < 3) throw std::invalid_argument("pbar_weak_check: need at least 3 terms");
  require_dim(limit, m.k(), "pbar_weak_check limit");
  for (const Vec& t : trace) require_dim(t, m.k(), "pbar_weak_check trace");
  PbarWeakResult res;
  res.converges = true;
  Vec col(trace.size());
  for (std::size_t i = 0; i < m.k(); ++i) {
    for (std::size_t n = 0; n < trace.size(); ++n) col[n] = trace[n][i] - limit[i];
    const double ls = tail_max(col, window);
    const bool ok = !(m.weights[i] > 0.0) || ls <= tol;
    res.coordinates.push_back({ls, ok});
    res.converges = res.converges && ok;
  }
  return res;
}

// ---------------------------------------------------------------------------

/// W - y written as a well-posedness problem in coefficient space: f = V,
/// phi = A^T y, and the asymmetric norm p(a) = p_mu(A a).
inline Problem as_problem(const Model& m, Vec y) {
  const ModelCertificate cert = validate_model(m);
  if (cert.rank != m.d()) throw std::invalid_argument("as_problem: feature matrix must have full column rank");
  require_dual_cone(m, y);
  const Model model = m;
  ClosedForm cf;
  cf.name = "cgf";
  cf.convex = true;
  cf.value = [model](std::span<const double> a) { return cgf_value(model, a); };
  cf.gradient = [model](std::span<const double> a) { return cgf_gradient(model, a); };
  cf.hessian = [model](std::span<const double> a) {
    const Eigen::MatrixXd h = cgf_hessian(model, a);
    Vec out(static_cast<std::size_t>(h.size()));
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j) out[static_cast<std::size_t>(i * h.cols() + j)] = h(i, j);
    return out;
  };
  cf.conjugate = [model](std::span<const double> b) {
    SolveOptions opt;
    const auto r = detail::newton_minimise(model, b, Vec(model.d(), 0.0), opt);
    return r.converged ? -r.objective : kInf;
  };
  const AsymNorm norm = AsymNorm::custom(
      m.d(), [model](std::span<const double> a) { return p_measure(model, features_apply(model, a)); }, "p_mu");
  // <y, A a> <= max_i (y_i / mu_i) * sum_i mu_i max((A a)_i, 0) for y >= 0
  MembershipCertificate c;
  c.verdict = Membership::member;
  for (std::size_t i = 0; i < m.k(); ++i) c.bound = std::max(c.bound, y[i] / m.weights[i]);
  Problem::Options opt;
  opt.phi_certificate = c;
  opt.convex = true;
  return Problem(std::nullopt, std::move(cf), Functional{detail::linear_term(m, y)}, norm, std::move(opt));
}

/// Minimisation report for as_problem(m, y) taken from a tilted minimiser.
inline MinimisationReport minimisation_report(const Model& m, std::span<const double> y, const TiltedMinimiser& tm) {
  MinimisationReport rep;
  rep.argmin = tm.a;
  rep.inf_value = cgf_value(m, tm.a) - dot(detail::linear_term(m, y), tm.a);
  rep.method = Method::descent;
  rep.gap_bound = euclidean_norm(subtract(cgf_gradient(m, tm.a), detail::linear_term(m, y)));
  rep.ties.push_back(tm.a);
  return rep;
}

/// Seeded model with k atoms in R^d: Gaussian atoms centred under random weights.
inline Model random_model(std::size_t k, std::size_t d, std::uint64_t seed) {
  if (k < 2 || d == 0) throw std::invalid_argument("random_model: need k >= 2 and d >= 1");
  Rng rng(seed);
  Model m;
  std::uniform_real_distribution<double> uni(0.2, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    m.weights.push_back(uni(rng));
    total += m.weights.back();
  }
  for (double& w : m.weights) w /= total;
  for (std::size_t i = 0; i < k; ++i) m.atoms.push_back(gaussian_vector(d, rng));
  // centre twice: the second pass removes the rounding left by the first
  for (int pass = 0; pass < 2; ++pass) {
    Vec mean(d, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < d; ++j) mean[j] += m.weights[i] * m.atoms[i][j];
    for (auto& a : m.atoms)
      for (std::size_t j = 0; j < d; ++j) a[j] -= mean[j];
  }
  return m;
}

/// Atoms +-1 with equal weights.
inline Model two_atom_model() { return Model{{{1.0}, {-1.0}}, {0.5, 0.5}}; }

/// y proportional to mu_i exp(<a0, atom_i>): W - y is then minimised at a0.
inline Vec tilted_measure(const Model& m, std::span<const double> a0) { return gibbs_weights(m, features_apply(m, a0)); }

inline nlohmann::json model_to_json(const Model& m) { return {{"atoms", m.atoms}, {"weights", m.weights}}; }

inline Model model_from_json(const nlohmann::json& j) {
  Model m;
  m.atoms = j.at("atoms").get<std::vector<Vec>>();
  m.weights = j.at("weights").get<Vec>();
  return m;
}

inline nlohmann::json conjugate_report_to_json(const ConjugateReport& r) {
  nlohmann::json j;
  j["y"] = r.y;
  j["status"] = r.status;
  j["epsilon_star"] = r.coercivity.epsilon_star;
  j["coercive"] = r.coercivity.coercive;
  if (r.value) {
    j["value"] = *r.value;
    j["T"] = r.T;
    j["a"] = r.a;
    j["gradient_norm"] = r.gradient_norm;
    j["iterations"] = r.iterations;
    j["start_spread"] = r.start_spread;
  }
  return j;
}

}  // namespace asymwp::cgf
