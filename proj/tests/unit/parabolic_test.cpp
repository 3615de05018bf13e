#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "censolve/error.hpp"
#include "censolve/parabolic.hpp"
#include "censolve/stationary.hpp"
#include "fixtures.hpp"

namespace censolve {
namespace {

using testing::censored_problem;
using testing::sup_norm;

TEST(AdvanceTest, StationaryConstantIsFixed) {
  ProblemSpec p = censored_problem(40);
  const double c0 = 0.75;
  p.lambda = 1.5;
  p.f.assign(p.grid.size(), p.lambda * c0);
  p.phi = BoundaryData::constant(c0, c0);
  p.u0.assign(p.grid.size(), c0);
  const Scheme scheme(p);
  const StepResult step = advance(scheme, p.u0, 0.0, 0.1);
  for (double v : step.u) EXPECT_EQ(v, c0);
  EXPECT_LE(step.dt_used, 0.1);
}

TEST(AdvanceTest, ZeroIsFixedWithoutDiscount) {
  ProblemSpec p = censored_problem(40);
  p.lambda = 0.0;
  const Trajectory traj = solve_evolution(p, 1.0, {.store_every = 0.25});
  for (const GridFunction& u : traj.fields) EXPECT_LE(sup_norm(u), 1e-12);
}

TEST(AdvanceTest, StepIsOrderPreserving) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.0, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    ProblemSpec p1 = censored_problem(24);
    p1.lambda = trial % 2 ? 1.0 : 0.0;
    p1.mode = trial % 3 ? BoundaryMode::dirichlet : BoundaryMode::state_constraint;
    p1.f = testing::sin_field(p1.grid, val(rng), 2.0);
    ProblemSpec p2 = p1;
    for (double& v : p2.f) v += gap(rng);
    GridFunction u1(p1.grid.size()), u2(p1.grid.size());
    for (std::size_t i = 0; i < u1.size(); ++i) {
      u1[i] = val(rng);
      u2[i] = u1[i] + gap(rng);
    }
    const Scheme s1(p1), s2(p2);
    const double dt = 0.9 * std::min(s1.monotone_step_limit(u1, p1.lambda),
                                     s2.monotone_step_limit(u2, p2.lambda));
    const StepResult a = advance(s1, u1, 0.0, dt);
    const StepResult b = advance(s2, u2, 0.0, dt);
    ASSERT_EQ(a.dt_used, dt);
    ASSERT_EQ(b.dt_used, dt);
    for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_LE(a.u[i], b.u[i] + 1e-14) << trial;
  }
}

TEST(AdvanceTest, DtCollapseIsReported) {
  ProblemSpec p = censored_problem(100);
  const Scheme scheme(p);
  const GridFunction steep = p.grid.sample([](double x) { return 1e14 * x * (1 - x); });
  EXPECT_THROW(advance(scheme, steep, 0.0, 1.0), ConvergenceError);
}

TEST(SolveEvolutionTest, SnapshotsLandOnRequestedTimes) {
  ProblemSpec p = censored_problem(40);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  const Trajectory traj = solve_evolution(p, 1.05, {.store_every = 0.25});
  const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0, 1.05};
  ASSERT_EQ(traj.times.size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_DOUBLE_EQ(traj.times[k], expected[k]);
  ASSERT_EQ(traj.dt_used.size(), traj.step_limit.size());
  for (std::size_t k = 0; k < traj.dt_used.size(); ++k) {
    EXPECT_LE(traj.dt_used[k], 0.9 * traj.step_limit[k] * (1 + 1e-12));
  }
}

TEST(SolveEvolutionTest, InitialFieldImposedExactly) {
  ProblemSpec p = censored_problem(40);
  p.u0 = testing::sin_field(p.grid, 0.5, 1.0);
  const Trajectory traj = solve_evolution(p, 0.5);
  EXPECT_EQ(traj.fields.front(), p.u0);
}

TEST(SolveEvolutionTest, CompatibilityIsRequired) {
  ProblemSpec p = censored_problem(40);
  p.u0.assign(p.grid.size(), 1.0);
  EXPECT_THROW(solve_evolution(p, 1.0), ParameterError);
  p.mode = BoundaryMode::state_constraint;
  EXPECT_NO_THROW(solve_evolution(p, 0.1));
}

TEST(LinfBoundsTest, GrowthAndUniformBoundsHold) {
  for (double lambda : {0.0, 1.0}) {
    ProblemSpec p = censored_problem(80);
    p.lambda = lambda;
    p.f = testing::sin_field(p.grid, 2.0, 2.0, 0.5);
    p.phi = BoundaryData::constant(0.3, -0.2);
    p.u0 = p.grid.sample([](double x) { return 0.3 - 0.5 * x + 0.4 * std::sin(std::numbers::pi * x); });
    const Trajectory traj = solve_evolution(p, 5.0, {.store_every = 0.05});
    const LinfBoundReport rep = check_linf_bounds(p, traj);
    EXPECT_LE(rep.growth_excess, 1e-6);
    if (lambda > 0) {
      ASSERT_TRUE(rep.uniform_excess.has_value());
      EXPECT_LE(*rep.uniform_excess, 1e-6);
    } else {
      EXPECT_FALSE(rep.uniform_excess.has_value());
    }
  }
}

TEST(ComparisonInTimeTest, OrderedDataStayOrdered) {
  ProblemSpec lo = censored_problem(50);
  lo.f = testing::sin_field(lo.grid, 1.0, 2.0);
  lo.u0 = testing::sin_field(lo.grid, 0.2, 1.0);
  ProblemSpec hi = lo;
  for (double& v : hi.f) v += 0.1;
  hi.u0 = testing::sin_field(hi.grid, 0.4, 1.0);
  hi.phi = BoundaryData::constant(0.0, 0.0);
  const Trajectory a = solve_evolution(lo, 3.0, {.store_every = 0.5});
  const Trajectory b = solve_evolution(hi, 3.0, {.store_every = 0.5});
  for (std::size_t k = 0; k < a.snapshots(); ++k) {
    for (std::size_t i = 0; i < a.fields[k].size(); ++i) {
      EXPECT_LE(a.fields[k][i], b.fields[k][i] + 1e-8);
    }
  }
}

TEST(TimeLipschitzTest, ConstantStableAcrossHorizons) {
  ProblemSpec p = censored_problem(60);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  p.u0 = testing::sin_field(p.grid, 0.3, 1.0);
  const double short_run = time_lipschitz_constant(solve_evolution(p, 2.0, {.store_every = 0.05}));
  const double long_run = time_lipschitz_constant(solve_evolution(p, 8.0, {.store_every = 0.05}));
  EXPECT_GT(short_run, 0.0);
  EXPECT_LE(std::max(short_run, long_run) / std::min(short_run, long_run), 2.0);
}

Trajectory synthetic(const std::function<double(double)>& g, double T, double dt) {
  Trajectory traj;
  for (int k = 0; k * dt <= T + 1e-12; ++k) {
    traj.times.push_back(k * dt);
    traj.fields.push_back(GridFunction(3, g(k * dt)));
  }
  return traj;
}

TEST(SupConvolutionTest, ConstantInTimeIsUnchanged) {
  const Trajectory traj = synthetic([](double) { return 2.0; }, 1.0, 0.01);
  const Trajectory conv = sup_convolution_time(traj, 0.1);
  for (const GridFunction& u : conv.fields) EXPECT_EQ(u[0], 2.0);
}

TEST(SupConvolutionTest, LinearInTimeShiftsByQuarterGamma) {
  const double gamma = 0.2;
  const Trajectory traj = synthetic([](double s) { return s; }, 1.0, gamma / 40);
  const Trajectory conv = sup_convolution_time(traj, gamma);
  for (std::size_t k = 0; k < traj.snapshots(); ++k) {
    const double t = traj.times[k];
    if (t + gamma / 2 <= 1.0) EXPECT_NEAR(conv.fields[k][1], t + gamma / 4, 1e-12) << t;
  }
}

TEST(SupConvolutionTest, DominatesOriginal) {
  ProblemSpec p = censored_problem(30);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  const Trajectory traj = solve_evolution(p, 1.0, {.store_every = 0.02});
  const Trajectory conv = sup_convolution_time(traj, 0.2);
  for (std::size_t k = 0; k < traj.snapshots(); ++k) {
    for (std::size_t i = 0; i < traj.fields[k].size(); ++i) {
      EXPECT_GE(conv.fields[k][i], traj.fields[k][i]);
    }
  }
  EXPECT_THROW(sup_convolution_time(traj, 0.0), ParameterError);
}

TEST(KappaCurveTest, IdenticalTrajectoriesGiveZero) {
  ProblemSpec p = censored_problem(30);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  const Trajectory traj = solve_evolution(p, 1.0);
  const KappaCurve k = kappa_curve(traj, traj);
  for (double v : k.kappa) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(k.max_upward_violation, 0.0);
}

TEST(KappaCurveTest, NonincreasingTowardsSteadyState) {
  ProblemSpec p = censored_problem(80);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  p.u0 = testing::sin_field(p.grid, 0.8, 1.0);
  StationaryOptions so;
  so.tol = 1e-12;
  const GridFunction v = solve_stationary(p, so).u;
  const KappaCurve k = kappa_curve(solve_evolution(p, 5.0, {.store_every = 0.05}), v);
  EXPECT_LE(k.max_upward_violation, 1e-8);
  EXPECT_GT(k.kappa.front(), k.kappa.back());
}

TEST(KappaCurveTest, ReportsUpwardViolation) {
  Trajectory traj = synthetic([](double s) { return s < 0.5 ? -s : s - 1.0; }, 1.0, 0.1);
  const KappaCurve k = kappa_curve(traj, GridFunction(3, 0.0));
  // running minimum -0.5 at t = 0.5, final value 0
  EXPECT_NEAR(k.max_upward_violation, 0.5, 1e-12);
}

}  // namespace
}  // namespace censolve
