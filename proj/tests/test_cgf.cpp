#include <gtest/gtest.h>

#include <numbers>

#include "asymwp/cgf.hpp"

using namespace asymwp;
using namespace asymwp::cgf;

namespace {

// 1-D conjugate by bisection on the decreasing derivative <y, x> - gibbs_mean(a)
double bisect_conjugate_1d(const Model& m, const Vec& y) {
  double ybar = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) ybar += y[i] * m.atoms[i][0];
  auto mean_at = [&](double a) {
    double mx = -kInf;
    for (const auto& x : m.atoms) mx = std::max(mx, a * x[0]);
    double z = 0.0, s = 0.0;
    for (std::size_t i = 0; i < m.k(); ++i) {
      const double w = m.weights[i] * std::exp(a * m.atoms[i][0] - mx);
      z += w;
      s += w * m.atoms[i][0];
    }
    return s / z;
  };
  double lo = -60.0, hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ybar - mean_at(mid) > 0.0 ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  double lse = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i) lse += m.weights[i] * std::exp(a * m.atoms[i][0]);
  return a * ybar - std::log(lse);
}

double relative_entropy(const Vec& y, const Vec& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] > 0.0) s += y[i] * std::log(y[i] / mu[i]);
  return s;
}

// growth ratio (max T - <y,T>) / ||T||_L1 minimised over an angle sweep of the plane,
// then swept again finely around the best coarse angle
double swept_epsilon_star(const Model& m, const Vec& y, std::size_t samples) {
  auto ratio = [&](double th) {
    const Vec t = features_apply(m, Vec{std::cos(th), std::sin(th)});
    return (*std::max_element(t.begin(), t.end()) - dot(y, t)) / l1_measure(m, t);
  };
  const double step = 2.0 * std::numbers::pi / static_cast<double>(samples);
  double best = kInf, best_th = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double th = step * static_cast<double>(s);
    if (const double r = ratio(th); r < best) {
      best = r;
      best_th = th;
    }
  }
  for (std::size_t s = 0; s <= samples; ++s)
    best = std::min(best, ratio(best_th - step + 2.0 * step * static_cast<double>(s) / static_cast<double>(samples)));
  return best;
}

const Model kFour{{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 2.0}, {0.0, -2.0}}, {0.25, 0.25, 0.25, 0.25}};

}  // namespace

TEST(Model, Validation) {
  EXPECT_TRUE(validate_model(two_atom_model()).valid);
  EXPECT_TRUE(validate_model(kFour).valid);
  EXPECT_EQ(validate_model(kFour).rank, 2u);

  const Model off{{{1.0}, {1.0}}, {0.5, 0.5}};
  const auto c = certify_model(off);
  EXPECT_FALSE(c.valid);
  EXPECT_NEAR(c.mean_residual, 1.0, 1e-15);
  EXPECT_TRUE(c.duplicate_atoms);
  try {
    validate_model(off);
    FAIL() << "expected InvalidModel";
  } catch (const InvalidModel& e) {
    EXPECT_FALSE(e.certificate.valid);
  }
  EXPECT_THROW(validate_model(Model{{{1.0}, {-1.0}}, {1.0, 0.0}}), InvalidModel);
  EXPECT_THROW(validate_model(Model{{{1.0}, {-1.0}}, {0.6, 0.6}}), InvalidModel);
  EXPECT_THROW(validate_model(Model{{{0.0}}, {1.0}}), InvalidModel);
  EXPECT_THROW(validate_model(Model{{{1.0, 0.0}, {-1.0}}, {0.5, 0.5}}), InvalidModel);

  // duplicates are flagged but allowed
  const Model dup{{{1.0}, {1.0}, {-1.0}}, {0.25, 0.25, 0.5}};
  const auto dc = validate_model(dup);
  EXPECT_TRUE(dc.valid);
  EXPECT_TRUE(dc.duplicate_atoms);
  EXPECT_GE(dc.constant_residual, kConstantTol);
}

TEST(Model, RandomModelsAreValid) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = certify_model(random_model(4 + s % 5, 1 + s % 3, s));
    EXPECT_TRUE(c.valid) << c.message;
    EXPECT_LE(c.mean_residual, kMeanTol);
  }
}

TEST(Cgf, ValueExamples) {
  const Model m = two_atom_model();
  EXPECT_EQ(cgf_value(m, Vec{0.0}), 0.0);
  for (double s : {-3.0, -0.5, 0.5493, 2.0, 40.0})
    EXPECT_NEAR(cgf_value(m, Vec{s}), std::log(std::cosh(s)), 1e-12 * std::max(1.0, s));
  EXPECT_NEAR(cgf_value(m, Vec{0.5493}), 0.1438, 1e-4);
  // log-sum-exp keeps huge arguments finite
  EXPECT_NEAR(cgf_value(m, Vec{800.0}), 800.0 - std::log(2.0), 1e-9);
  EXPECT_THROW(cgf_value(m, Vec{std::nan("")}), std::invalid_argument);
}

TEST(Cgf, GradientAndHessianExamples) {
  const Model m = two_atom_model();
  EXPECT_EQ(cgf_gradient(m, Vec{0.0})[0], 0.0);
  for (double s : {-2.0, 0.3, 1.7}) {
    EXPECT_NEAR(cgf_gradient(m, Vec{s})[0], std::tanh(s), 1e-14);
    EXPECT_NEAR(cgf_hessian(m, Vec{s})(0, 0), 1.0 - std::tanh(s) * std::tanh(s), 1e-14);
  }
}

TEST(Cgf, NonnegativeByJensen) {
  Rng rng(41);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Model m = random_model(6, 3, s);
    for (int i = 0; i < 50; ++i) EXPECT_GE(cgf_value(m, gaussian_vector(3, rng)), -1e-15);
  }
}

TEST(Cgf, GradientMatchesCentralDifferences) {
  Rng rng(42);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const Model m = random_model(3 + i % 6, 1 + i % 3, derive_seed(42, i));
    const Vec a = gaussian_vector(m.d(), rng);
    const Vec g = cgf_gradient(m, a);
    for (std::size_t j = 0; j < m.d(); ++j) {
      Vec ap = a, am = a;
      ap[j] += h;
      am[j] -= h;
      EXPECT_NEAR(g[j], (cgf_value(m, ap) - cgf_value(m, am)) / (2.0 * h), 1e-6);
    }
  }
}

TEST(Cgf, HessianIsSymmetricPsdAndMatchesGradientDifferences) {
  Rng rng(43);
  const double h = 1e-5;
  for (int i = 0; i < 40; ++i) {
    const Model m = random_model(5, 3, derive_seed(43, i));
    const Vec a = gaussian_vector(3, rng);
    const Eigen::MatrixXd H = cgf_hessian(m, a);
    EXPECT_LE((H - H.transpose()).norm(), 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    for (std::size_t j = 0; j < 3; ++j) {
      Vec ap = a, am = a;
      ap[j] += h;
      am[j] -= h;
      const Vec gp = cgf_gradient(m, ap), gm = cgf_gradient(m, am);
      for (std::size_t r = 0; r < 3; ++r)
        EXPECT_NEAR(H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)), (gp[r] - gm[r]) / (2.0 * h), 1e-6);
    }
  }
}

TEST(Measure, AsymmetricL1) {
  const Model m = two_atom_model();
  EXPECT_EQ(p_measure(m, Vec{1.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(p_measure(m, Vec{1.0, -1.0}), 0.5);
  EXPECT_DOUBLE_EQ(pbar_measure(m, Vec{1.0, -1.0}), 0.5);
  EXPECT_THROW(p_measure(m, Vec{1.0}), DimensionError);
  Rng rng(44);
  const Model r = random_model(7, 2, 44);
  for (int i = 0; i < 100; ++i) {
    const Vec t = gaussian_vector(7, rng);
    EXPECT_NEAR(p_measure(r, t) + pbar_measure(r, t), l1_measure(r, t), 1e-14);
  }
}

TEST(Measure, PropertiesOfWOnItsDomain) {
  Rng rng(45);
  const Model m = random_model(8, 3, 45);
  for (int i = 0; i < 1000; ++i) {
    Vec a = gaussian_vector(3, rng);
    for (double& v : a) v *= 3.0;
    const Vec t = features_apply(m, a);
    EXPECT_NEAR(w_value(m, t), cgf_value(m, a), 1e-12);
    double integral = 0.0;
    for (std::size_t k = 0; k < m.k(); ++k) integral += m.weights[k] * t[k];
    EXPECT_GE(integral, -1e-10);
    EXPECT_GE(w_value(m, t), std::max(std::log(l1_measure(m, t)), 0.0) - 1e-9);
  }
  // off the feature span W is infinite
  Vec off(8, 0.0);
  off[0] = 1.0;
  EXPECT_EQ(w_value(m, off), kInf);
  EXPECT_GT(span_residual(m, Vec(8, 1.0)), kConstantTol);
}

TEST(Coercivity, TwoAtomExamples) {
  const Model m = two_atom_model();
  const Vec eps{0.1, 0.25, 0.49, 0.5, 0.6};
  const auto rep = coercivity_check(m, Vec{0.75, 0.25}, eps);
  // along a = +1: (1 - 0.5) / 1; along a = -1: (1 + 0.5) / 1
  EXPECT_NEAR(rep.epsilon_star, 0.5, 1e-14);
  EXPECT_TRUE(rep.coercive);
  ASSERT_TRUE(rep.largest_passing);
  EXPECT_DOUBLE_EQ(*rep.largest_passing, 0.49);
  EXPECT_TRUE(rep.verdicts[1].second);
  EXPECT_FALSE(rep.verdicts[3].second);

  const auto bad = coercivity_check(m, Vec{1.0, 0.0}, eps);
  EXPECT_FALSE(bad.coercive);
  EXPECT_NEAR(bad.epsilon_star, 0.0, 1e-14);
  EXPECT_FALSE(bad.largest_passing);

  const auto at_mu = coercivity_check(m, m.weights, eps);
  EXPECT_NEAR(at_mu.epsilon_star, 1.0, 1e-14);
  EXPECT_THROW(coercivity_check(m, Vec{1.5, -0.5}, eps), NotInDualCone);
}

TEST(Coercivity, ExtremeRaysMatchDenseSampling) {
  Rng rng(46);
  for (int i = 0; i < 12; ++i) {
    const Model m = random_model(5 + i % 3, 2, derive_seed(46, i));
    Vec y = uniform_vector(m.k(), 0.0, 1.0, rng);
    const double eps[] = {0.0};
    const auto rep = coercivity_check(m, y, eps);
    EXPECT_EQ(rep.method, "extreme-rays");
    const double swept = swept_epsilon_star(m, y, 20000);
    EXPECT_LE(rep.epsilon_star, swept + 1e-12);  // exact minimum never above a sample
    EXPECT_GE(rep.epsilon_star, swept - 1e-6);
  }
}

TEST(Conjugate, TwoAtomOracle) {
  const Model m = two_atom_model();
  const auto r = cgf_conjugate(m, Vec{0.75, 0.25});
  ASSERT_TRUE(r.value);
  EXPECT_EQ(r.status, "converged");
  const double oracle = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(*r.value, oracle, 1e-12);
  EXPECT_NEAR(*r.value, 0.130812, 1e-6);
  EXPECT_NEAR(r.T[0], std::atanh(0.5), 1e-10);
  EXPECT_NEAR(r.T[1], -std::atanh(0.5), 1e-10);
  EXPECT_LE(r.gradient_norm, 1e-10);
}

TEST(Conjugate, VanishesAtTheReferenceMeasure) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Model m = random_model(6, 2, s);
    const auto r = cgf_conjugate(m, m.weights);
    ASSERT_TRUE(r.value);
    EXPECT_NEAR(*r.value, 0.0, 1e-12);
    for (double t : r.T) EXPECT_NEAR(t, 0.0, 1e-8);
  }
}

TEST(Conjugate, NonCoerciveHasNoValue) {
  const auto r = cgf_conjugate(two_atom_model(), Vec{1.0, 0.0});
  EXPECT_EQ(r.status, "non-coercive");
  EXPECT_FALSE(r.value);
  EXPECT_THROW(tilted_minimise(two_atom_model(), Vec{1.0, 0.0}), NonCoercive);
}

TEST(Conjugate, OneDimensionalBisectionOracle) {
  Rng rng(47);
  for (int i = 0; i < 20; ++i) {
    const Model m = random_model(3 + i % 5, 1, derive_seed(47, i));
    const Vec y = tilted_measure(m, Vec{std::uniform_real_distribution<double>(-1.5, 1.5)(rng)});
    const auto r = cgf_conjugate(m, y);
    ASSERT_TRUE(r.value);
    EXPECT_NEAR(*r.value, bisect_conjugate_1d(m, y), 1e-10);
  }
}

TEST(Conjugate, TiltedMeasuresGiveRelativeEntropy) {
  Rng rng(48);
  for (int i = 0; i < 20; ++i) {
    const Model m = random_model(4 + i % 5, 1 + i % 3, derive_seed(48, i));
    const Vec a0 = gaussian_vector(m.d(), rng);
    const Vec y = tilted_measure(m, a0);
    const auto r = cgf_conjugate(m, y);
    ASSERT_TRUE(r.value);
    EXPECT_GE(*r.value, 0.0);
    EXPECT_NEAR(*r.value, relative_entropy(y, m.weights), 1e-9);
    const Vec t0 = features_apply(m, a0);
    for (std::size_t k = 0; k < m.k(); ++k) EXPECT_NEAR(r.T[k], t0[k], 1e-6);
  }
}

TEST(Conjugate, ReportJson) {
  const auto r = cgf_conjugate(two_atom_model(), Vec{0.75, 0.25});
  const auto j = conjugate_report_to_json(r);
  EXPECT_EQ(j["status"], "converged");
  EXPECT_NEAR(j["value"].get<double>(), 0.130812036, 1e-9);
  const auto m = model_from_json(model_to_json(kFour));
  EXPECT_EQ(m.atoms, kFour.atoms);
  EXPECT_EQ(m.weights, kFour.weights);
}

TEST(Tilted, TwoAtomAllStartsAgree) {
  const auto tm = tilted_minimise(two_atom_model(), Vec{0.75, 0.25}, 16, 3);
  EXPECT_TRUE(tm.agree);
  EXPECT_EQ(tm.start_minimisers.size(), 16u);
  for (const Vec& t : tm.start_minimisers) EXPECT_NEAR(t[0], std::atanh(0.5), 1e-8);
  EXPECT_EQ(tm.interval_lo, 0.0);
  EXPECT_EQ(tm.interval_hi, 0.0);
  EXPECT_EQ(tm.T, tm.S);
  EXPECT_LE(tm.max_gibbs_variance, 1e-12);
}

TEST(Tilted, ReferenceMeasureGivesZero) {
  const Model m = random_model(5, 2, 9);
  const auto tm = tilted_minimise(m, m.weights);
  for (double t : tm.T) EXPECT_NEAR(t, 0.0, 1e-8);
}

TEST(Tilted, ShiftByConstant) {
  EXPECT_EQ(shift_by_constant(Vec{1.0, -1.0}, 0.0), (Vec{1.0, -1.0}));
  EXPECT_EQ(shift_by_constant(Vec{1.0, -1.0}, 0.5), (Vec{1.5, -0.5}));
}

TEST(Tilted, RandomModelsAgreeAcrossStarts) {
  Rng rng(49);
  for (int i = 0; i < 10; ++i) {
    const Model m = random_model(6, 3, derive_seed(49, i));
    const auto tm = tilted_minimise(m, tilted_measure(m, gaussian_vector(3, rng)), 8, derive_seed(50, i));
    EXPECT_TRUE(tm.agree) << (tm.diagnostics.empty() ? "" : tm.diagnostics.front());
    EXPECT_LE(tm.max_disagreement, 1e-6);
  }
}

TEST(PbarWeak, Examples) {
  const Model m = two_atom_model();
  const Vec T{0.5, -0.5};
  std::vector<Vec> shrinking, stuck;
  for (int n = 1; n <= 4000; ++n) {
    shrinking.push_back({T[0] + 1.0 / n, T[1] - 1.0 / n});
    stuck.push_back({T[0] + 1.0, T[1]});
  }
  EXPECT_TRUE(pbar_weak_check(m, shrinking, T).converges);
  const auto r = pbar_weak_check(m, stuck, T);
  EXPECT_FALSE(r.converges);
  EXPECT_FALSE(r.coordinates[0].converges);
  EXPECT_TRUE(r.coordinates[1].converges);
  EXPECT_THROW(pbar_weak_check(m, std::span(stuck).first(2), T), std::invalid_argument);
  EXPECT_THROW(pbar_weak_check(m, shrinking, Vec{0.0}), DimensionError);
}

TEST(PbarWeak, MinimisingTracesConvergeToTheTiltedMinimiser) {
  const Model m = two_atom_model();
  const Vec y{0.75, 0.25};
  const auto tm = tilted_minimise(m, y);
  const Problem prob = as_problem(m, y);
  const MinimisationReport rep = minimisation_report(m, y, tm);
  for (Strategy st : {Strategy::descent, Strategy::random_perturbed}) {
    for (const auto& tr : gen_minimising_sequences(prob, rep, st, 8, 5)) {
      EXPECT_TRUE(tr.complete) << tr.note;
      std::vector<Vec> ts;
      for (const Vec& a : tr.points) ts.push_back(features_apply(m, a));
      EXPECT_TRUE(pbar_weak_check(m, ts, tm.T).converges);
    }
  }
}

TEST(Differentiability, GateauxDerivativeOfConjugateIsT) {
  Rng rng(51);
  for (int i = 0; i < 4; ++i) {
    const Model m = random_model(5, 2, derive_seed(51, i));
    const Vec y = tilted_measure(m, gaussian_vector(2, rng));
    const auto tm = tilted_minimise(m, y);
    SolveOptions so;
    so.starts = 1;
    const ScalarField wstar = [&](std::span<const double> z) {
      const auto r = cgf_conjugate(m, z, so);
      return r.value ? *r.value : kInf;
    };
    for (int j = 0; j < 5; ++j) {
      const Vec psi = uniform_vector(m.k(), 0.0, 1.0, rng);
      EXPECT_NEAR(right_gateaux_estimate(wstar, y, psi).extrapolated, dot(psi, tm.T), 1e-4);
    }
  }
}
