#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "heq/solvers.hpp"
#include "test_util.hpp"

using namespace heq;
using heq::test::exp_point;

namespace {

// Scalar recursion for example52: every step scales the chart vector by q,
// and the step length is rho times the current chart norm.
std::size_t brute_force_count(Method method, double lambda, double u0, double tol) {
  const double s = method == Method::Remb ? lambda : lambda / 2;
  double u = u0;
  for (std::size_t n = 0;; ++n) {
    const double v = u / (1 + s);
    const double next = u - lambda * v;
    if (std::abs(next - u) <= tol) return n;
    u = next;
  }
}

SolverConfig config(double tol, std::size_t max_iter = 100000) {
  SolverConfig c;
  c.tol = tol;
  c.max_iter = max_iter;
  return c;
}

}  // namespace

TEST(Solver, StartAtSolutionTakesZeroIterations) {
  const auto f = LogAffineBifunction::example52(3);
  const Point ones = f.manifold().point({1, 1, 1});
  for (Method method : {Method::Remb, Method::Remd}) {
    const auto r = solve(method, f, f.manifold(), ones, StepSchedule::constant(0.5), config(1e-8));
    EXPECT_EQ(r.trace.status, TerminalStatus::Converged);
    EXPECT_EQ(r.trace.iterations(), 0u);
    EXPECT_EQ(r.solution, ones);
    ASSERT_EQ(r.trace.rows.size(), 1u);
    EXPECT_EQ(r.trace.rows[0].er, 0.0);
  }
}

TEST(Solver, RembFirstStepsOnExample52) {
  const auto f = LogAffineBifunction::example52(1);
  const auto& m = f.manifold();
  const auto r = solve_remb(f, m, exp_point({1}), StepSchedule::constant(0.25), config(1e-8));
  ASSERT_GE(r.trace.rows.size(), 3u);
  EXPECT_NEAR(std::log(r.trace.x(1)[0]), 0.8, 1e-15);
  EXPECT_NEAR(std::log(r.trace.x(2)[0]), 0.64, 1e-15);
  EXPECT_NEAR(std::log(r.trace.y(0)[0]), 0.8, 1e-15);
  EXPECT_NEAR(r.trace.rows[0].er, 0.2, 1e-15);
  EXPECT_NEAR(r.trace.rows[0].dxy, 0.2, 1e-15);
}

TEST(Solver, RemdFirstStepOnExample52) {
  const auto f = LogAffineBifunction::example52(1);
  const auto r = solve_remd(f, f.manifold(), exp_point({1}), StepSchedule::constant(0.5), config(1e-8));
  // y = u / 1.25, x1 = u - 0.5 y = 0.6 u
  EXPECT_NEAR(std::log(r.trace.y(0)[0]), 0.8, 1e-15);
  EXPECT_NEAR(std::log(r.trace.x(1)[0]), 0.6, 1e-15);
}

TEST(Solver, IterationCountsMatchClosedForm) {
  const auto f1 = LogAffineBifunction::example52(1);
  const Point e = exp_point({1});
  EXPECT_EQ(solve_remb(f1, f1.manifold(), e, StepSchedule::constant(0.25), config(1e-8)).trace.iterations(), 76u);
  EXPECT_EQ(iteration_count_oracle(f1, Method::Remb, 0.25, e, 1e-8), 76u);
  EXPECT_EQ(solve_remd(f1, f1.manifold(), e, StepSchedule::constant(0.5), config(1e-8)).trace.iterations(), 35u);
  EXPECT_EQ(iteration_count_oracle(f1, Method::Remd, 0.5, e, 1e-8), 35u);

  const auto f3 = LogAffineBifunction::example52(3);
  const Point e3 = exp_point({1, 1, 1});
  EXPECT_EQ(solve_remd(f3, f3.manifold(), e3, StepSchedule::constant(0.5), config(1e-8)).trace.iterations(), 36u);
  EXPECT_EQ(iteration_count_oracle(f3, Method::Remd, 0.5, e3, 1e-8), 36u);
}

TEST(Solver, OracleAgreesWithBruteForceRecursion) {
  CounterRng rng(12);
  for (int k = 0; k < 300; ++k) {
    const double lambda = 0.01 + 1.5 * rng.uniform01();
    const double u0 = 0.1 + 5 * rng.uniform01();
    const double tol = std::pow(10.0, -rng.uniform(3, 10));
    const auto f = LogAffineBifunction::example52(1);
    const Point x0 = exp_point({u0});
    for (Method method : {Method::Remb, Method::Remd}) {
      EXPECT_EQ(iteration_count_oracle(f, method, lambda, x0, tol), brute_force_count(method, lambda, u0, tol))
          << "lambda=" << lambda << " u0=" << u0 << " tol=" << tol;
    }
  }
}

TEST(Solver, ExactCountsOverInitialBox) {
  const auto f = LogAffineBifunction::example52(3);
  CounterRng rng(13);
  for (int k = 0; k < 40; ++k) {
    const Point x0 = f.manifold().point(
        {double(rng.uniform_int(5, 20)), double(rng.uniform_int(5, 20)), double(rng.uniform_int(5, 20))});
    const double lambda = 0.03 * (1 + rng.uniform_int(0, 9));
    for (Method method : {Method::Remb, Method::Remd}) {
      const auto r = solve(method, f, f.manifold(), x0, StepSchedule::constant(lambda), config(1e-8));
      EXPECT_EQ(r.trace.iterations(), iteration_count_oracle(f, method, lambda, x0, 1e-8));
    }
  }
}

TEST(Solver, OracleRejectsOtherBifunctions) {
  const auto f = LogAffineBifunction::example51();
  EXPECT_THROW(iteration_count_oracle(f, Method::Remb, 0.1, f.manifold().point({1, 2, 3}), 1e-8), Error);
}

TEST(Solver, Example51ConvergesToProjection) {
  // The kernel component of the chart vector is invariant; the c component contracts.
  const auto f = LogAffineBifunction::example51();
  const auto& m = f.manifold();
  const Point x0 = m.point({1, 2, 3});
  Vector c(3);
  c << 1, 1, -1;
  const Vector u0 = m.to_chart(x0);
  const Vector expected = u0 - c * (c.dot(u0) / 3.0);
  for (Method method : {Method::Remb, Method::Remd}) {
    const auto r = solve(method, f, m, x0, StepSchedule::constant(0.1), config(1e-13));
    EXPECT_EQ(r.trace.status, TerminalStatus::Converged);
    EXPECT_LT((m.to_chart(r.solution) - expected).norm(), 1e-8);
    EXPECT_NEAR(r.solution[0] * r.solution[1], r.solution[2], 1e-7);
  }
}

TEST(Solver, StepLengthsAreNonincreasing) {
  const double dense[] = {2, 1, 0, -1, 1, 0.3, 0, -0.3, 0.5};
  const auto f = LogAffineBifunction::from_row_major(3, dense);
  ASSERT_TRUE(f.is_monotone());
  CounterRng rng(14);
  for (int k = 0; k < 10; ++k) {
    const Point x0 = test::random_point(f.manifold(), rng);
    const auto r = solve_remb(f, f.manifold(), x0, StepSchedule::constant(0.2), config(1e-10));
    for (std::size_t n = 1; n < r.trace.rows.size(); ++n) {
      EXPECT_LE(r.trace.rows[n].er, r.trace.rows[n - 1].er * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(Solver, Deterministic) {
  const auto f = LogAffineBifunction::example51();
  const Point x0 = f.manifold().point({1, 2, 3});
  const auto a = solve_remd(f, f.manifold(), x0, StepSchedule::constant(0.3), config(1e-10));
  const auto b = solve_remd(f, f.manifold(), x0, StepSchedule::constant(0.3), config(1e-10));
  ASSERT_EQ(a.trace.rows.size(), b.trace.rows.size());
  EXPECT_EQ(a.solution, b.solution);
  for (std::size_t n = 0; n < a.trace.rows.size(); ++n) EXPECT_EQ(a.trace.rows[n].er, b.trace.rows[n].er);
}

TEST(Solver, VariableScheduleUsesEachValue) {
  const auto f = LogAffineBifunction::example52(1);
  const auto sched = StepSchedule::sequence({0.5, 0.25, 0.1}, 0.1);
  const auto r = solve_remb(f, f.manifold(), exp_point({1}), sched, config(1e-8));
  EXPECT_EQ(r.trace.rows[0].lambda, 0.5);
  EXPECT_EQ(r.trace.rows[1].lambda, 0.25);
  EXPECT_EQ(r.trace.rows[2].lambda, 0.1);
  EXPECT_EQ(r.trace.rows[5].lambda, 0.1);
  EXPECT_NEAR(std::log(r.trace.x(2)[0]), 1 / 1.5 / 1.25, 1e-15);
}

TEST(Solver, ScheduleValidation) {
  EXPECT_THROW(StepSchedule::constant(0.0), Error);
  EXPECT_THROW(StepSchedule::constant(-1.0), Error);
  EXPECT_THROW(StepSchedule::constant(std::nan("")), Error);
  EXPECT_THROW(StepSchedule::sequence({}, 0.1), Error);
  EXPECT_THROW(StepSchedule::sequence({0.5, 0.05}, 0.1), Error);
  EXPECT_NO_THROW(StepSchedule::sequence({0.5, 0.1}, 0.1));
  EXPECT_THROW(StepSchedule::constant(0.5, 0.0), Error);
  const auto s = StepSchedule::sequence({0.5, 0.2}, 0.1);
  EXPECT_EQ(s.lower_bound(), 0.1);
  EXPECT_EQ(s.limsup_param(), 0.2);
  EXPECT_EQ(s[100], 0.2);
}

TEST(Solver, InputValidation) {
  const auto f = LogAffineBifunction::example52(2);
  const Point x0 = f.manifold().point({1, 2});
  EXPECT_THROW(solve_remb(f, Manifold::log_orthant(3), x0, StepSchedule::constant(0.1), config(1e-8)), Error);
  EXPECT_THROW(solve_remb(f, f.manifold(), Point({1.0, 2.0, 3.0}), StepSchedule::constant(0.1), config(1e-8)),
               Error);
  EXPECT_THROW(solve_remb(f, f.manifold(), x0, StepSchedule::constant(0.1), config(0.0)), Error);
  EXPECT_THROW(solve_remb(f, f.manifold(), x0, StepSchedule::constant(0.1), config(1e-8, 0)), Error);
  SolverConfig lit = config(1e-8);
  lit.variant = ResolventVariant::PaperLiteralEx51;
  EXPECT_THROW(solve_remb(f, f.manifold(), x0, StepSchedule::constant(0.1), lit), Error);
}

TEST(Solver, MaxIterAndStagnation) {
  const auto f = LogAffineBifunction::example52(3);
  const Point x0 = f.manifold().point({5, 10, 20});
  const auto capped = solve_remb(f, f.manifold(), x0, StepSchedule::constant(0.03), config(1e-8, 5));
  EXPECT_EQ(capped.trace.status, TerminalStatus::MaxIterReached);
  EXPECT_EQ(capped.trace.iterations(), 5u);
  EXPECT_EQ(capped.trace.x(5), capped.solution);

  // example52 contracts to the exact solution, so the step length reaches zero
  // only after underflow; a tolerance below the rounding floor of a non-trivial
  // fixed point (example51) stops on stagnation instead.
  const auto g = LogAffineBifunction::example51();
  const auto stalled = solve_remb(g, g.manifold(), g.manifold().point({5, 10, 20}), StepSchedule::constant(0.3),
                                  config(1e-300, 100000));
  EXPECT_EQ(stalled.trace.status, TerminalStatus::Stagnated);
  EXPECT_LT(stalled.trace.iterations(), 100000u);
  SolverConfig no_stall = config(1e-300, 2000);
  no_stall.stall_factor = 0.0;
  // Without the stall rule the run either reaches an exactly repeated iterate or the cap.
  const auto unstalled =
      solve_remb(g, g.manifold(), g.manifold().point({5, 10, 20}), StepSchedule::constant(0.3), no_stall);
  EXPECT_NE(unstalled.trace.status, TerminalStatus::Stagnated);
  if (unstalled.trace.status == TerminalStatus::Converged) EXPECT_EQ(unstalled.trace.rows.back().er, 0.0);
  EXPECT_GT(unstalled.trace.rows.size(), stalled.trace.rows.size());
}

TEST(Solver, TraceWithoutPoints) {
  const auto f = LogAffineBifunction::example52(2);
  SolverConfig cfg = config(1e-8);
  cfg.record_trace = false;
  const auto r = solve_remd(f, f.manifold(), f.manifold().point({3, 4}), StepSchedule::constant(0.3), cfg);
  EXPECT_FALSE(r.trace.has_points());
  EXPECT_THROW(r.trace.x(0), Error);
  EXPECT_THROW(r.trace.y(0), Error);
  EXPECT_EQ(r.trace.x(r.trace.rows.size()), r.solution);
  EXPECT_GT(r.trace.rows.size(), 1u);
}

TEST(Solver, TraceCsvFormat) {
  const auto f = LogAffineBifunction::example52(1);
  const auto r = solve_remb(f, f.manifold(), exp_point({1}), StepSchedule::constant(0.25), config(1e-8));
  std::ostringstream os;
  write_trace_csv(os, r.trace);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,lambda,dxy,er,elapsed_s");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("0,0.25,", 0), 0u);
  std::size_t count = 1;
  std::string last, status;
  while (std::getline(is, line)) {
    if (line.rfind("status,", 0) == 0) status = line;
    last = line;
    ++count;
  }
  EXPECT_EQ(status, "status,converged,76");
  EXPECT_EQ(last.rfind("solution,", 0), 0u);
  EXPECT_EQ(count, r.trace.rows.size() + 2);
}

TEST(Solver, PaperLiteralEndpointFromFixedPointAnalysis) {
  // The prox step moves the chart vector along c only, so its kernel part p is
  // invariant. The literal formula gives c.v proportional to u1 - u2 - u3, so the
  // run stops on the plane x1 = x2 x3, not on the solution set x1 x2 = x3.
  const auto f = LogAffineBifunction::example51();
  const auto& m = f.manifold();
  const Point x0 = m.point({1, 2, 3});
  Vector c(3);
  c << 1, 1, -1;
  const Vector u0 = m.to_chart(x0);
  const Vector p = u0 - c * (c.dot(u0) / 3.0);
  const Vector expected = p + (p(1) + p(2) - p(0)) * c;
  EXPECT_NEAR(std::exp(expected(0)), 6.0, 1e-12);
  EXPECT_NEAR(std::exp(expected(1)), 12.0, 1e-12);
  EXPECT_NEAR(std::exp(expected(2)), 0.5, 1e-12);

  SolverConfig cfg = config(1e-16, 1000000);
  cfg.variant = ResolventVariant::PaperLiteralEx51;
  for (Method method : {Method::Remb, Method::Remd}) {
    const auto r = solve(method, f, m, x0, StepSchedule::constant(0.03), cfg);
    EXPECT_NE(r.trace.status, TerminalStatus::MaxIterReached);
    EXPECT_LT((m.to_chart(r.solution) - expected).norm(), 1e-12);
    EXPECT_GT(dist(m, r.solution, m.point({1, 1, 1})), 2.0);
    for (std::size_t n = 1; n < r.trace.rows.size(); ++n) {
      EXPECT_LE(r.trace.rows[n].er, r.trace.rows[n - 1].er + 1e-13) << "n=" << n;
    }
  }
}
