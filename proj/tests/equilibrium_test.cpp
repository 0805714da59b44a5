#include <gtest/gtest.h>

#include <cmath>

#include "heq/busemann.hpp"
#include "heq/equilibrium.hpp"
#include "test_util.hpp"

using namespace heq;
using heq::test::exp_point;
using heq::test::kE;

namespace {

void expect_chart_near(const Manifold& m, const Point& p, std::initializer_list<double> logs, double tol) {
  const Vector u = m.to_chart(p);
  Eigen::Index i = 0;
  for (double l : logs) {
    EXPECT_NEAR(u(i), l, tol) << "component " << i;
    ++i;
  }
}

// Oracle for prox_step: minimize F(anchor, y) + d^2(center, y)/(2 lambda) by
// gradient descent on chart coordinates, differentiating the objective
// numerically through the manifold operations only.
Vector numeric_prox(const LogAffineBifunction& f, double lambda, const Point& center, const Point& anchor) {
  const Manifold& m = f.manifold();
  auto objective = [&](const Vector& w) {
    const Point y = m.from_chart(w);
    return f(anchor, y) + dist_sq(m, center, y) / (2 * lambda);
  };
  Vector w = m.to_chart(center);
  const double h = 1e-5;
  const double step = lambda / (1.0 + lambda);
  for (int it = 0; it < 2000; ++it) {
    Vector g(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      Vector a = w, b = w;
      a(i) += h;
      b(i) -= h;
      g(i) = (objective(a) - objective(b)) / (2 * h);
    }
    w -= step * g;
    if (g.norm() < 1e-11) break;
  }
  return w;
}

}  // namespace

TEST(Bifunction, EvalExamples) {
  const auto f52 = LogAffineBifunction::example52(2);
  const auto m2 = f52.manifold();
  const Point x = m2.point({kE, kE});
  EXPECT_EQ(f52(x, x), 0.0);
  EXPECT_NEAR(f52(x, m2.point({kE * kE, kE * kE})), 2.0, 1e-14);

  const auto f51 = LogAffineBifunction::example51();
  const auto m3 = f51.manifold();
  EXPECT_NEAR(f51(m3.point({kE, kE, kE}), m3.point({kE * kE, kE, kE})), 3.0, 1e-14);
  EXPECT_THROW(f51(m2.point({1, 1}), m2.point({1, 1})), Error);
}

TEST(Bifunction, Example51MatchesPrintedFormula) {
  const auto f = LogAffineBifunction::example51();
  CounterRng rng(4);
  for (int k = 0; k < 200; ++k) {
    const Point x = test::random_point(f.manifold(), rng), y = test::random_point(f.manifold(), rng);
    const double s = 3 * std::log(x[0] * x[1] / x[2]);
    const double printed = s * std::log(y[0] / x[0]) + s * std::log(y[1] / x[1]) - s * std::log(y[2] / x[2]);
    EXPECT_NEAR(f(x, y), printed, 1e-11 * (1 + std::abs(printed)));
    EXPECT_EQ(f(x, x), 0.0);
  }
}

TEST(Bifunction, MonotonicityFlagsAndModulus) {
  EXPECT_TRUE(LogAffineBifunction::example51().is_monotone());
  EXPECT_FALSE(LogAffineBifunction::example51().strong_monotonicity_modulus().has_value());
  EXPECT_DOUBLE_EQ(*LogAffineBifunction::example52(4).strong_monotonicity_modulus(), 1.0);
  const double neg[] = {-1, 0, 0, -1};
  EXPECT_FALSE(LogAffineBifunction::from_row_major(2, neg).is_monotone());
  // Skew part does not affect monotonicity.
  const double skew[] = {2, 5, -5, 1};
  const auto fs = LogAffineBifunction::from_row_major(2, skew);
  EXPECT_EQ(fs.structure(), LogAffineBifunction::Structure::Dense);
  EXPECT_NEAR(*fs.strong_monotonicity_modulus(), 1.0, 1e-12);
  const double short_list[] = {1, 2, 3};
  EXPECT_THROW(LogAffineBifunction::from_row_major(2, short_list), Error);
}

TEST(Resolvent, Example52MatchesPrintedClosedForms) {
  const auto f = LogAffineBifunction::example52(3);
  const auto& m = f.manifold();
  const Point x = exp_point({2, 2, 2});
  expect_chart_near(m, resolvent_busemann(f, 1.0, x), {1, 1, 1}, 1e-15);
  expect_chart_near(m, resolvent_distsq(f, 2.0, x), {1, 1, 1}, 1e-15);
  CounterRng rng(6);
  for (int k = 0; k < 200; ++k) {
    const Point p = test::random_point(m, rng);
    const double lambda = 0.01 + rng.uniform01();
    const Point jb = resolvent_busemann(f, lambda, p);
    const Point kd = resolvent_distsq(f, lambda, p);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(jb[i], std::pow(p[i], 1 / (1 + lambda)), 1e-12 * jb[i]);
      EXPECT_NEAR(kd[i], std::pow(p[i], 1 / (1 + lambda / 2)), 1e-12 * kd[i]);
    }
  }
}

TEST(Resolvent, OnesIsFixed) {
  for (const auto& f : {LogAffineBifunction::example51(), LogAffineBifunction::example52(3)}) {
    const Point ones = f.manifold().point({1, 1, 1});
    EXPECT_EQ(resolvent_busemann(f, 0.7, ones), ones);
    EXPECT_EQ(resolvent_distsq(f, 0.7, ones), ones);
  }
  const auto f51 = LogAffineBifunction::example51();
  const Point ones = f51.manifold().point({1, 1, 1});
  EXPECT_EQ(resolvent_busemann(f51, 0.7, ones, ResolventVariant::PaperLiteralEx51), ones);
}

TEST(Resolvent, Example51Variants) {
  const auto f = LogAffineBifunction::example51();
  const auto& m = f.manifold();
  const Point x = exp_point({1, 1, 1});
  expect_chart_near(m, resolvent_busemann(f, 1.0 / 3, x), {0.75, 0.75, 1.25}, 1e-15);
  expect_chart_near(m, resolvent_distsq(f, 2.0 / 3, x), {0.75, 0.75, 1.25}, 1e-15);
  expect_chart_near(m, resolvent_busemann(f, 1.0 / 3, x, ResolventVariant::PaperLiteralEx51), {1.5, 0.5, 2.5},
                    1e-15);
}

TEST(Resolvent, PaperLiteralFormulaIsNotAFixedPointResolvent) {
  // x = (2, 3, 6) solves the problem (x1 x2 = x3) but the literal formula moves it.
  const auto f = LogAffineBifunction::example51();
  const Point x = f.manifold().point({2, 3, 6});
  CounterRng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_GE(f(x, test::random_point(f.manifold(), rng)), -1e-12);
  const Point lit = resolvent_busemann(f, 0.3, x, ResolventVariant::PaperLiteralEx51);
  EXPECT_GT(dist(f.manifold(), lit, x), 0.1);
  const Point chr = resolvent_busemann(f, 0.3, x);
  EXPECT_LT(dist(f.manifold(), chr, x), 1e-14);
}

TEST(Resolvent, VariantMismatchAndBadLambda) {
  const auto f52 = LogAffineBifunction::example52(3);
  const Point x = f52.manifold().point({1, 2, 3});
  try {
    resolvent_busemann(f52, 0.5, x, ResolventVariant::PaperLiteralEx51);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VariantMismatch);
  }
  EXPECT_THROW(resolvent_busemann(f52, 0.0, x), Error);
  EXPECT_THROW(resolvent_distsq(f52, -1.0, x), Error);
  EXPECT_THROW(prox_step(f52, 0.0, x, x), Error);
}

TEST(Resolvent, SingularShiftIsReported) {
  const double neg[] = {-1, 0, 0, -1};
  const auto f = LogAffineBifunction::from_row_major(2, neg);
  try {
    f.shifted(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
  }
  const double dense[] = {-1, 1e-3, 0, -1};
  EXPECT_THROW(LogAffineBifunction::from_row_major(2, dense).shifted(1.0), Error);
}

TEST(Resolvent, VariationalResidualOracle) {
  // Oracle: the defining inequalities, sampled over random y.
  const double sym_psd[] = {2, 1, 0, 1, 2, 0.5, 0, 0.5, 1};
  const std::vector<LogAffineBifunction> fs = {LogAffineBifunction::example51(),
                                               LogAffineBifunction::example52(3),
                                               LogAffineBifunction::from_row_major(3, sym_psd)};
  CounterRng rng(77);
  for (const auto& f : fs) {
    const auto& m = f.manifold();
    for (int k = 0; k < 20; ++k) {
      const Point x = test::random_point(m, rng);
      const double lambda = 0.02 + rng.uniform01();
      const Point zb = resolvent_busemann(f, lambda, x);
      const Point zd = resolvent_distsq(f, lambda, x);
      for (int j = 0; j < 50; ++j) {
        const Point y = test::random_point(m, rng);
        EXPECT_GE(busemann_resolvent_residual(f, lambda, x, zb, y), -1e-9);
        EXPECT_GE(distsq_resolvent_residual(f, lambda, x, zd, y), -1e-9);
      }
    }
  }
}

TEST(Resolvent, PaperLiteralFailsResidualOracle) {
  const auto f = LogAffineBifunction::example51();
  CounterRng rng(78);
  const Point x = test::random_point(f.manifold(), rng);
  const Point z = resolvent_busemann(f, 0.3, x, ResolventVariant::PaperLiteralEx51);
  double worst = 0;
  for (int j = 0; j < 200; ++j) {
    worst = std::min(worst, busemann_resolvent_residual(f, 0.3, x, z, test::random_point(f.manifold(), rng)));
  }
  EXPECT_LT(worst, -1e-3);
}

TEST(Resolvent, HalfLambdaReductionIsExact) {
  CounterRng rng(90);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
    Matrix b(n, n), skew(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        b(i, j) = rng.normal();
        skew(i, j) = rng.normal();
      }
    const auto f = LogAffineBifunction::from_matrix(b * b.transpose() + (skew - skew.transpose()));
    ASSERT_TRUE(f.is_monotone(1e-10));
    const Point x = test::random_point(f.manifold(), rng);
    const double lambda = 0.01 + rng.uniform01();
    EXPECT_EQ(resolvent_distsq(f, lambda, x), resolvent_busemann(f, lambda / 2, x));
  }
  const auto f51 = LogAffineBifunction::example51();
  const Point x = f51.manifold().point({1, 2, 3});
  EXPECT_EQ(resolvent_distsq(f51, 0.4, x, ResolventVariant::PaperLiteralEx51),
            resolvent_busemann(f51, 0.2, x, ResolventVariant::PaperLiteralEx51));
}

TEST(Resolvent, ShermanMorrisonMatchesDenseSolve) {
  CounterRng rng(91);
  for (int k = 0; k < 50; ++k) {
    Vector c(4);
    for (int i = 0; i < 4; ++i) c(i) = rng.normal();
    const auto f = LogAffineBifunction::rank_one(Manifold::log_orthant(4), 0.1 + 3 * rng.uniform01(), c);
    Vector u(4);
    for (int i = 0; i < 4; ++i) u(i) = rng.normal();
    const double s = 0.01 + rng.uniform01();
    EXPECT_LT((f.shifted(s).solve(u) - f.solve_dense(s, u)).norm(), 1e-12 * (1 + u.norm()));
  }
  const auto f51 = LogAffineBifunction::example51();
  Vector u(3);
  u << 0.3, -1.2, 2.0;
  EXPECT_LT((f51.shifted(0.21).solve(u) - f51.solve_dense(0.21, u)).norm(), 1e-14);
}

TEST(Prox, Examples) {
  const auto f52 = LogAffineBifunction::example52(2);
  const auto& m2 = f52.manifold();
  const Point xn = exp_point({1, 1});
  expect_chart_near(m2, prox_step(f52, 0.5, xn, m2.point({1, 1})), {1, 1}, 1e-15);
  expect_chart_near(m2, prox_step(f52, 0.5, xn, exp_point({0.8, 0.8})), {0.6, 0.6}, 1e-15);

  const auto f51 = LogAffineBifunction::example51();
  const Point e3 = exp_point({1, 1, 1});
  expect_chart_near(f51.manifold(), prox_step(f51, 0.1, e3, e3), {0.7, 0.7, 1.3}, 1e-15);
}

TEST(Prox, MatchesNumericMinimizer) {
  const double dense[] = {1.5, 0.3, -0.2, 0.1, 1.0, 0.4, 0.0, -0.4, 0.8};
  const std::vector<LogAffineBifunction> fs = {LogAffineBifunction::example51(),
                                               LogAffineBifunction::example52(2),
                                               LogAffineBifunction::from_row_major(3, dense)};
  CounterRng rng(55);
  for (const auto& f : fs) {
    for (int k = 0; k < 3; ++k) {
      const Point center = test::random_point(f.manifold(), rng, -1, 1);
      const Point anchor = test::random_point(f.manifold(), rng, -1, 1);
      const double lambda = 0.1 + 0.5 * rng.uniform01();
      const Vector closed = f.manifold().to_chart(prox_step(f, lambda, center, anchor));
      EXPECT_LT((closed - numeric_prox(f, lambda, center, anchor)).norm(), 1e-7);
    }
  }
  // Tight agreement on the example51 row from the closed-form check.
  const auto f = LogAffineBifunction::example51();
  const Point e3 = exp_point({1, 1, 1});
  Vector expected(3);
  expected << 0.7, 0.7, 1.3;
  EXPECT_LT((f.manifold().to_chart(prox_step(f, 0.1, e3, e3)) - expected).norm(), 1e-10);
}

TEST(Prox, OptimalityInequality) {
  const auto f = LogAffineBifunction::example51();
  CounterRng rng(56);
  for (int k = 0; k < 50; ++k) {
    const Point center = test::random_point(f.manifold(), rng);
    const Point anchor = test::random_point(f.manifold(), rng);
    const double lambda = 0.03 + rng.uniform01();
    const Point xp = prox_step(f, lambda, center, anchor);
    for (int j = 0; j < 20; ++j) {
      EXPECT_GE(prox_residual(f, lambda, center, anchor, xp, test::random_point(f.manifold(), rng)), -1e-9);
    }
  }
}

TEST(Probes, Monotone) {
  CounterRng rng(60);
  const auto f52 = LogAffineBifunction::example52(3);
  const auto p52 = probe_monotone(f52, chart_box_sampler(f52.manifold(), -3, 3), rng, 2000);
  EXPECT_TRUE(p52.passed);
  EXPECT_LE(p52.max_value, 0.0);

  const auto f51 = LogAffineBifunction::example51();
  EXPECT_TRUE(probe_monotone(f51, chart_box_sampler(f51.manifold(), -3, 3), rng, 2000).passed);

  const double neg[] = {-1, 0, 0, 0, -1, 0, 0, 0, -1};
  const auto fneg = LogAffineBifunction::from_row_major(3, neg);
  const auto pneg = probe_monotone(fneg, chart_box_sampler(fneg.manifold(), -3, 3), rng, 100);
  EXPECT_FALSE(pneg.passed);
  ASSERT_TRUE(pneg.witness_x && pneg.witness_y);
  EXPECT_GT(fneg(*pneg.witness_x, *pneg.witness_y) + fneg(*pneg.witness_y, *pneg.witness_x), 0.0);
  EXPECT_THROW(probe_monotone(fneg, chart_box_sampler(fneg.manifold(), -3, 3), rng, 0), Error);
}

TEST(Probes, StrongPseudomonotone) {
  CounterRng rng(61);
  const auto f52 = LogAffineBifunction::example52(3);
  const auto sampler = chart_box_sampler(f52.manifold(), -3, 3);
  const auto ok = probe_strong_pseudomonotone(f52, 1.0, sampler, rng, 5000);
  EXPECT_TRUE(ok.passed);
  EXPECT_GT(ok.considered, 0u);
  EXPECT_FALSE(probe_strong_pseudomonotone(f52, 2.0, sampler, rng, 5000).passed);

  const auto f51 = LogAffineBifunction::example51();
  const auto s51 = chart_box_sampler(f51.manifold(), -3, 3);
  for (double beta : {0.05, 0.5, 1.0}) {
    EXPECT_FALSE(probe_strong_pseudomonotone(f51, beta, s51, rng, 20000).passed) << "beta=" << beta;
  }
}
