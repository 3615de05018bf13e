#include <gtest/gtest.h>

#include <random>

#include "censolve/ergodic.hpp"
#include "censolve/error.hpp"
#include "censolve/stationary.hpp"
#include "fixtures.hpp"

namespace censolve {
namespace {

using testing::censored_problem;
using testing::sup_diff;
using testing::sup_norm;

TEST(SolveStationaryTest, ZeroDataGivesZero) {
  for (double m : {0.8, 2.0, 3.0}) {
    ProblemSpec p = censored_problem(64);
    p.m = m;
    p.b = testing::sin_field(p.grid, 0.5, 1, 1.0);
    const SolutionField sol = solve_stationary(p);
    EXPECT_LE(sup_norm(sol.u), 1e-12);
  }
}

TEST(SolveStationaryTest, ConstantsSolveWithMatchingBoundary) {
  ProblemSpec p = censored_problem(100);
  p.f.assign(p.grid.size(), 1.0);
  p.phi = BoundaryData::constant(1.0, 1.0);
  const SolutionField sol = solve_stationary(p);
  for (double v : sol.u) EXPECT_NEAR(v, 1.0, 1e-10);
  EXPECT_FALSE(sol.boundary_loss[0]);
  EXPECT_FALSE(sol.boundary_loss[1]);
}

TEST(SolveStationaryTest, ResidualCertificateHoldsEverywhere) {
  ProblemSpec p = censored_problem(100);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  StationaryOptions opts;
  opts.tol = 1e-11;
  const SolutionField sol = solve_stationary(p, opts);
  const Scheme scheme(p);
  for (std::size_t i = 1; i + 1 < p.grid.size(); ++i) {
    EXPECT_LE(std::abs(scheme.residual(sol.u, i, p.lambda, p.f[i])), 1e-11);
  }
  EXPECT_LE(sol.residual_norm, 1e-11);
}

TEST(SolveStationaryTest, ComparisonAndNonexpansiveness) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    ProblemSpec p1 = censored_problem(48);
    const double a = coef(rng), k = 1 + 3 * gap(rng), s = coef(rng);
    p1.f = p1.grid.sample([&](double x) { return a * std::sin(k * 3.14159 * x) + s * x; });
    p1.phi = BoundaryData::constant(coef(rng), coef(rng));
    ProblemSpec p2 = p1;
    const double lift = gap(rng), bump = gap(rng);
    for (std::size_t i = 0; i < p2.f.size(); ++i) {
      p2.f[i] += lift + bump * std::exp(-50 * std::pow(p2.grid.node(i) - 0.3, 2));
    }
    const GridFunction u1 = solve_stationary(p1).u;
    const GridFunction u2 = solve_stationary(p2).u;
    for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_LE(u1[i], u2[i] + 1e-8) << trial;
    EXPECT_LE(sup_diff(u1, u2), sup_diff(p1.f, p2.f) / p1.lambda + 1e-8);
  }
}

TEST(SolveStationaryTest, SupNormBound) {
  ProblemSpec p = censored_problem(80);
  p.lambda = 2.0;
  p.f = testing::sin_field(p.grid, 3.0, 3.0);
  p.phi = BoundaryData::constant(-0.5, 0.25);
  const SolutionField sol = solve_stationary(p);
  EXPECT_LE(sup_norm(sol.u), sup_norm(p.f) / p.lambda + 0.5 + 1e-10);
}

TEST(DetectBoundaryLossTest, CoerciveInstanceLosesRightBoundary) {
  ProblemSpec p = censored_problem(100);
  p.m = 3.0;
  p.phi = BoundaryData::constant(0.0, 10.0);
  const Scheme scheme(p);
  StationaryOptions opts;
  opts.tol = 1e-10;
  const SolutionField sol = solve_stationary(scheme, opts);
  const BoundaryLossReport rep = detect_boundary_loss(scheme, sol, 1e-8);
  EXPECT_FALSE(rep.lost[0]);
  EXPECT_TRUE(rep.lost[1]);
  EXPECT_LT(sol.u.back(), 10.0);
  EXPECT_TRUE(rep.subsolution_ok);
  EXPECT_LE(rep.equation_residual[1], 1e-8);
}

TEST(DetectBoundaryLossTest, SubsolutionSideAlwaysHolds) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    ProblemSpec p = censored_problem(40);
    p.f = testing::sin_field(p.grid, val(rng), 2.0, val(rng));
    p.phi = BoundaryData::constant(val(rng), val(rng));
    const Scheme scheme(p);
    const SolutionField sol = solve_stationary(scheme);
    const BoundaryLossReport rep = detect_boundary_loss(scheme, sol, 1e-9);
    EXPECT_TRUE(rep.subsolution_ok);
    EXPECT_LE(sol.u.front(), p.phi.left(0) + 1e-9);
    EXPECT_LE(sol.u.back(), p.phi.right(0) + 1e-9);
  }
}

TEST(SolveStationaryTest, Preconditions) {
  ProblemSpec sc = censored_problem(16);
  sc.mode = BoundaryMode::state_constraint;
  sc.lambda = 0.0;
  EXPECT_THROW(solve_stationary(sc), ParameterError);

  ProblemSpec dz = censored_problem(16);
  dz.lambda = 0.0;
  EXPECT_THROW(solve_stationary(dz), ParameterError);
  dz.ergodic_constant = 0.2;
  EXPECT_THROW(solve_stationary(dz), ParameterError);
  dz.ergodic_constant = -0.05;
  StationaryOptions strict;
  strict.strictness_margin = 0.1;
  EXPECT_THROW(solve_stationary(dz, strict), ParameterError);

  ProblemSpec bad = censored_problem(16);
  bad.m = 0.4;
  EXPECT_THROW(solve_stationary(bad), ParameterError);
  bad = censored_problem(16);
  bad.b[3] = 0.0;
  EXPECT_THROW(solve_stationary(bad), ParameterError);
}

TEST(SolveStationaryTest, LambdaZeroWithNegativeErgodicConstant) {
  ProblemSpec p = censored_problem(64);
  p.lambda = 0.0;
  p.f.assign(p.grid.size(), 1.0);
  const ErgodicPair pair = solve_ergodic_pair(p);
  ASSERT_NEAR(pair.c, -1.0, 1e-8);
  p.ergodic_constant = pair.c;
  StationaryOptions opts;
  opts.tol = 1e-10;
  const SolutionField sol = solve_stationary(p, opts);
  EXPECT_LE(sol.residual_norm, 1e-10);
  EXPECT_LE(sol.u.front(), 1e-10);
}

TEST(SolveStationaryTest, ReportsNonConvergence) {
  ProblemSpec p = censored_problem(64);
  p.f = testing::sin_field(p.grid, 1.0, 2.0);
  StationaryOptions opts;
  opts.max_iter = 2;
  try {
    solve_stationary(p, opts);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 2);
    EXPECT_GT(e.achieved(), 0.0);
  }
}

}  // namespace
}  // namespace censolve
