#include <gtest/gtest.h>

#include "asymwp/conjugate.hpp"

using namespace asymwp;

namespace {

GridFn random_gridfn(const GridSpec& g, Rng& rng, double inf_rate = 0.1) {
  std::uniform_real_distribution<double> uni(-3.0, 3.0), coin(0.0, 1.0);
  Vec v(g.size());
  for (double& x : v) x = coin(rng) < inf_rate ? kInf : uni(rng);
  v[g.size() / 2] = 0.0;
  return GridFn(g, std::move(v));
}

GridSpec random_grid(std::size_t dims, std::size_t count, Rng& rng) {
  std::vector<Axis> axes;
  std::uniform_real_distribution<double> lo(-3.0, -0.5), hi(0.5, 3.0);
  for (std::size_t k = 0; k < dims; ++k) axes.push_back({lo(rng), hi(rng), count + k});
  return GridSpec(axes);
}

// independent textbook supremum: loops over coordinates without the library's packing
double naive_sup(const GridFn& f, std::span<const double> y) {
  double best = -kInf;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (f.values[i] == kInf) continue;
    const Vec x = f.grid.point(i);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    best = std::max(best, s - f.values[i]);
  }
  return best;
}

}  // namespace

TEST(GridSpec, LayoutAndErrors) {
  const GridSpec g({{0.0, 1.0, 3}, {-1.0, 1.0, 5}});
  EXPECT_EQ(g.size(), 15u);
  EXPECT_EQ(g.point(0), (Vec{0.0, -1.0}));
  EXPECT_EQ(g.point(1), (Vec{0.0, -0.5}));  // last axis fastest
  EXPECT_EQ(g.point(14), (Vec{1.0, 1.0}));
  EXPECT_EQ(g.nearest(Vec{0.6, 0.3}), g.ravel(std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(g.nearest(Vec{9.0, -9.0}), g.ravel(std::vector<std::size_t>{2, 0}));
  EXPECT_TRUE(g.on_boundary(0));
  EXPECT_FALSE(g.on_boundary(g.ravel(std::vector<std::size_t>{1, 2})));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.ravel(g.unravel(i)), i);

  EXPECT_THROW(GridSpec({{1.0, 1.0, 3}}), std::invalid_argument);
  EXPECT_THROW(GridSpec({{0.0, 1.0, 1}}), std::invalid_argument);
  EXPECT_THROW(GridSpec(std::vector<Axis>{}), std::invalid_argument);
  EXPECT_THROW(GridSpec::cube(5, 0.0, 1.0, 2), std::invalid_argument);
  EXPECT_THROW(GridSpec::cube(2, 0.0, 1.0, 100, 1000), GridCapExceeded);
  EXPECT_NO_THROW(GridSpec::cube(2, 0.0, 1.0, 100, 10000));
}

TEST(GridSpec, SymmetricCubeHitsZeroExactly) {
  const auto g = GridSpec::cube(1, -2.0, 2.0, 201);
  EXPECT_EQ(g.point(100)[0], 0.0);
  EXPECT_EQ(g.point(75)[0], -0.5);
}

TEST(GridFn, Propriety) {
  const auto g = GridSpec::cube(1, 0.0, 1.0, 3);
  EXPECT_THROW(GridFn(g, {kInf, kInf, kInf}), ImproperFunction);
  EXPECT_THROW(GridFn(g, {0.0, -kInf, 1.0}), ImproperFunction);
  EXPECT_THROW(GridFn(g, {0.0, std::nan(""), 1.0}), ImproperFunction);
  EXPECT_THROW(GridFn(g, {0.0, 1.0}), DimensionError);
  EXPECT_NO_THROW(GridFn(g, {kInf, 0.0, kInf}));
}

TEST(GridFn, JsonRoundTripKeepsInfinity) {
  const auto g = GridSpec({{-1.0, 1.0, 3}, {0.0, 2.0, 2}});
  const GridFn f(g, {0.0, kInf, 1.5, -2.0, kInf, 3.0});
  const GridFn h = gridfn_from_json(gridfn_to_json(f));
  EXPECT_EQ(h.values, f.values);
  EXPECT_EQ(h.grid.size(), g.size());
  EXPECT_THROW(gridfn_from_json(nlohmann::json::parse(R"({"grid":[{"lo":0,"hi":1,"count":2}],"values":[0,"nan"]})")),
               std::invalid_argument);
  EXPECT_THROW(gridfn_from_json(nlohmann::json::parse(R"({"grid":[{"lo":0,"hi":1,"count":9}],"values":[0]})"), 4),
               GridCapExceeded);
}

TEST(Conjugate, BruteMatchesNaiveSupremum) {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const GridFn f = random_gridfn(random_grid(2, 7, rng), rng);
    const GridSpec dual = random_grid(2, 5, rng);
    const GridFn fs = conjugate_brute(f, dual);
    for (std::size_t k = 0; k < dual.size(); ++k) EXPECT_DOUBLE_EQ(fs.values[k], naive_sup(f, dual.point(k)));
  }
}

TEST(Conjugate, FastEqualsBruteAcrossShapes) {
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    const std::size_t dims = 1 + static_cast<std::size_t>(i % 3);
    const std::size_t count = dims == 1 ? 129 : dims == 2 ? 23 : 9;
    const GridFn f = random_gridfn(random_grid(dims, count, rng), rng, i % 4 == 0 ? 0.6 : 0.1);
    const GridSpec dual = random_grid(dims, count + 3, rng);
    std::optional<ConeMask> mask;
    if (i % 5 == 0) mask = ConeMask(dims, SignConstraint::nonpos);
    const GridFn a = conjugate_fast(f, dual, mask), b = conjugate_brute(f, dual, mask);
    for (std::size_t k = 0; k < dual.size(); ++k) {
      if (std::isinf(b.values[k])) {
        EXPECT_EQ(a.values[k], b.values[k]);
      } else {
        EXPECT_NEAR(a.values[k], b.values[k], 1e-12);
      }
    }
  }
}

TEST(Conjugate, QuadraticClosedForm) {
  // f(x) = |x|^2 / 2 has f*(y) = |y|^2 / 2 while the maximiser y stays inside the grid
  const auto g = GridSpec::cube(2, -3.0, 3.0, 301);
  const GridFn f = GridFn::sample(g, [](std::span<const double> x) { return 0.5 * dot(x, x); });
  const auto dual = GridSpec::cube(2, -2.0, 2.0, 41);
  const GridFn fs = conjugate_fast(f, dual);
  const double h = g.axis(0).spacing();
  for (std::size_t k = 0; k < dual.size(); ++k) {
    const Vec y = dual.point(k);
    EXPECT_LE(fs.values[k], 0.5 * dot(y, y) + 1e-12);            // discrete sup under-estimates
    EXPECT_GE(fs.values[k], 0.5 * dot(y, y) - h * h / 4.0 - 1e-12);  // by at most a half cell squared
  }
}

TEST(Conjugate, FenchelYoungInequality) {
  Rng rng(3);
  const GridFn f = random_gridfn(GridSpec::cube(2, -2.0, 2.0, 17), rng);
  const auto dual = GridSpec::cube(2, -3.0, 3.0, 13);
  const GridFn fs = conjugate_fast(f, dual);
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (!std::isfinite(f.values[i])) continue;
    for (std::size_t k = 0; k < dual.size(); ++k)
      EXPECT_GE(f.values[i] + fs.values[k], dot(f.grid.point(i), dual.point(k)) - 1e-12);
  }
}

TEST(Conjugate, MaskSetsInfinityOutsideCone) {
  const auto g = GridSpec::cube(2, -1.0, 1.0, 5);
  const GridFn f = GridFn::sample(g, [](std::span<const double> x) { return dot(x, x); });
  const ConeMask mask{SignConstraint::nonpos, SignConstraint::any};
  const GridFn fs = conjugate_fast(f, g, mask);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec y = g.point(k);
    if (y[0] > 0.0) {
      EXPECT_EQ(fs.values[k], kInf);
    } else {
      EXPECT_DOUBLE_EQ(fs.values[k], naive_sup(f, y));
    }
  }
}

TEST(Conjugate, ConjugateAtAgreesWithGrid) {
  Rng rng(4);
  const GridFn f = random_gridfn(GridSpec::cube(2, -1.0, 1.0, 11), rng);
  const auto dual = GridSpec::cube(2, -2.0, 2.0, 7);
  const GridFn fs = conjugate_brute(f, dual);
  for (std::size_t k = 0; k < dual.size(); ++k) EXPECT_DOUBLE_EQ(conjugate_at(f, dual.point(k)), fs.values[k]);
  EXPECT_THROW(conjugate_at(f, Vec{1.0}), DimensionError);
}

TEST(Conjugate, ArgmaxAttainsAndBreaksTiesLow) {
  Rng rng(5);
  const GridFn f = random_gridfn(GridSpec::cube(1, -1.0, 1.0, 21), rng);
  const auto dual = GridSpec::cube(1, -2.0, 2.0, 9);
  const auto arg = conjugate_argmax(f, dual);
  const GridFn fs = conjugate_brute(f, dual);
  for (std::size_t k = 0; k < dual.size(); ++k) {
    ASSERT_LT(arg[k], f.grid.size());
    EXPECT_DOUBLE_EQ(dual.point(k)[0] * f.grid.point(arg[k])[0] - f.values[arg[k]], fs.values[k]);
  }
  // constant f at y = 0: every point ties
  const GridFn flat(GridSpec::cube(1, -1.0, 1.0, 5), Vec(5, 0.0));
  EXPECT_EQ(conjugate_argmax(flat, GridSpec::cube(1, -1.0, 1.0, 3))[1], 0u);
  const auto masked = conjugate_argmax(flat, GridSpec::cube(1, -1.0, 1.0, 3), ConeMask{SignConstraint::nonpos});
  EXPECT_EQ(masked[2], flat.grid.size());
}

TEST(Biconjugate, NeverExceedsTheFunction) {
  Rng rng(6);
  for (int i = 0; i < 40; ++i) {
    const bool one_d = i % 2 == 0;
    const GridSpec g = one_d ? GridSpec::cube(1, -2.0, 2.0, 257) : GridSpec::cube(2, -2.0, 2.0, 65);
    const GridFn f = random_gridfn(g, rng);
    const GridSpec dual = one_d ? GridSpec::cube(1, -5.0, 5.0, 201) : GridSpec::cube(2, -5.0, 5.0, 41);
    const GridFn ff = biconjugate(f, dual);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (std::isfinite(f.values[k])) {
        EXPECT_LE(ff.values[k], f.values[k] + 1e-9);
      }
    }
  }
}

TEST(Biconjugate, RecoversConvexFunctions) {
  // convex, and every gradient at a grid point lies on the dual lattice, so f** = f on the grid
  const auto g = GridSpec::cube(2, -1.0, 1.0, 41);
  const GridFn f = GridFn::sample(g, [](std::span<const double> x) {
    return x[0] * x[0] + x[1] * x[1] + 0.4 * x[0] * x[1] + std::abs(x[1] - 0.2);
  });
  const GridFn ff = biconjugate(f, GridSpec::cube(2, -4.0, 4.0, 801));
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(ff.values[k], f.values[k], 1e-9);
}

TEST(Biconjugate, DoubleWellEnvelope) {
  const auto g = GridSpec::cube(1, -2.0, 2.0, 401);
  const GridFn f = GridFn::sample(g, [](std::span<const double> x) {
    const double q = x[0] * x[0] - 1.0;
    return q * q;
  });
  const GridFn ff = biconjugate(f, GridSpec::cube(1, -30.0, 30.0, 2001));
  const std::size_t mid = g.nearest(Vec{0.0});
  EXPECT_DOUBLE_EQ(f.values[mid], 1.0);
  EXPECT_NEAR(ff.values[mid], 0.0, 1e-9);
  EXPECT_NEAR(ff.values[g.nearest(Vec{1.5})], f.values[g.nearest(Vec{1.5})], 1e-2);
}

TEST(Biconjugate, MaskThatExcludesEverythingIsImproper) {
  const GridFn f(GridSpec::cube(1, 0.0, 1.0, 3), {0.0, 0.0, 0.0});
  EXPECT_THROW(biconjugate(f, GridSpec::cube(1, 0.5, 1.0, 3), ConeMask{SignConstraint::nonpos}), ImproperFunction);
}

TEST(Conjugate, InputErrors) {
  const GridFn f(GridSpec::cube(1, 0.0, 1.0, 3), {0.0, 0.0, 0.0});
  EXPECT_THROW(conjugate_fast(f, GridSpec::cube(2, 0.0, 1.0, 3)), DimensionError);
  EXPECT_THROW(conjugate_brute(f, GridSpec::cube(1, 0.0, 1.0, 3), ConeMask(2, SignConstraint::any)), DimensionError);
  EXPECT_THROW(conjugate_fast(f, GridSpec::cube(1, 0.0, 1.0, 50), std::nullopt, 10), GridCapExceeded);
}

TEST(Gauge, SquareHasQuarterSquareConjugate) {
  Vec t, a;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(i * 0.005);
    a.push_back(t.back() * t.back());
  }
  const GaugeFn alpha(t, a);
  for (double s = 0.0; s <= 4.0; s += 0.05) EXPECT_NEAR(gauge_conjugate_at(alpha, s), s * s / 4.0, 1e-4);
  const GaugeFn sharp = gauge_conjugate(alpha, t);
  EXPECT_EQ(sharp.values.front(), 0.0);
  // alpha# is nondecreasing and convex
  for (std::size_t i = 2; i < sharp.t.size(); ++i) {
    EXPECT_GE(sharp.values[i], sharp.values[i - 1]);
    EXPECT_GE(sharp.values[i] - 2.0 * sharp.values[i - 1] + sharp.values[i - 2], -1e-12);
  }
}

TEST(Gauge, InfiniteValuesAreSkipped) {
  const GaugeFn alpha({0.0, 1.0, 2.0}, {0.0, 0.5, kInf});
  EXPECT_DOUBLE_EQ(gauge_conjugate_at(alpha, 3.0), 2.5);
  EXPECT_THROW(gauge_conjugate_at(alpha, -1.0), std::invalid_argument);
}

TEST(Gauge, Validation) {
  EXPECT_THROW(GaugeFn({0.5, 1.0}, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(GaugeFn({0.0, 1.0}, {0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(GaugeFn({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(GaugeFn({0.0, 1.0}, {0.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(GaugeFn({0.0, 1.0}, {0.0}), std::invalid_argument);
}

TEST(Gauge, FromDelta) {
  // delta(eps) = eps: min{eps : eps >= t} = t, so alpha(t) = t^2
  DeltaSamples d;
  for (int i = 1; i <= 1000; ++i) {
    d.eps.push_back(i * 0.002);
    d.delta.push_back(i * 0.002);
  }
  const GaugeFn a = gauge_from_delta(d, Vec{0.0, 0.5, 1.0, 3.0});
  EXPECT_EQ(a.values[0], 0.0);
  EXPECT_NEAR(a.values[1], 0.25, 1e-9);
  EXPECT_NEAR(a.values[2], 1.0, 1e-9);
  EXPECT_EQ(a.values[3], kInf);  // no sampled eps reaches delta >= 3

  EXPECT_THROW(gauge_from_delta({{1.0}, {0.0}}, Vec{0.0}), std::invalid_argument);
  EXPECT_THROW(gauge_from_delta({{-1.0}, {1.0}}, Vec{0.0}), std::invalid_argument);
  EXPECT_THROW(gauge_from_delta({{1.0}, {1.0, 2.0}}, Vec{0.0}), DimensionError);
  EXPECT_THROW(gauge_from_delta({{}, {}}, Vec{0.0}), std::invalid_argument);
}
