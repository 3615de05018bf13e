#include "censolve/ltb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "censolve/error.hpp"
#include "censolve/stationary.hpp"

namespace censolve {

std::string_view to_string(LtbMode mode) {
  switch (mode) {
    case LtbMode::steady:
      return "steady";
    case LtbMode::ergodic_positive_c:
      return "ergodic-positive-c";
    case LtbMode::c_zero:
      return "c-zero";
  }
  return "steady";
}

LtbMode parse_ltb_mode(std::string_view text) {
  if (text == "steady") return LtbMode::steady;
  if (text == "ergodic-positive-c") return LtbMode::ergodic_positive_c;
  if (text == "c-zero") return LtbMode::c_zero;
  throw ParameterError("unknown large-time mode '" + std::string(text) + "'");
}

namespace {

double sup_distance(std::span<const double> a, std::span<const double> b, double offset) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i] - offset));
  return d;
}

double mean_difference(std::span<const double> a, std::span<const double> b, double shift) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] + shift - b[i];
  return s / static_cast<double>(a.size());
}

[[noreturn]] void mode_mismatch(LtbMode mode, const std::string& why) {
  throw ParameterError("large-time mode '" + std::string(to_string(mode)) + "': " + why);
}

}  // namespace

LtbReport run_ltb(const ProblemSpec& problem, LtbMode mode, double T, const LtbOptions& options) {
  problem.validate();
  if (problem.mode != BoundaryMode::dirichlet) {
    mode_mismatch(mode, "large-time experiments run the Dirichlet evolution");
  }
  if (!(T > 0.0)) throw ParameterError("large-time horizon T must be positive");

  LtbReport report;
  report.mode = mode;

  ErgodicOptions ergodic = options.ergodic;
  ergodic.tol = std::min(ergodic.tol, options.tol);
  std::optional<ErgodicPair> pair;
  if (problem.lambda == 0.0) {
    pair = solve_ergodic_pair(problem, ergodic);
    report.c = pair->c;
  }

  switch (mode) {
    case LtbMode::steady:
      if (problem.lambda == 0.0) {
        if (!(problem.m > 1.0)) mode_mismatch(mode, "lambda = 0 needs m > 1 (convex Hamiltonian)");
        if (!(*report.c < -options.c_margin)) {
          mode_mismatch(mode, "lambda = 0 needs an ergodic constant below -margin");
        }
      }
      break;
    case LtbMode::ergodic_positive_c:
      if (problem.lambda != 0.0) mode_mismatch(mode, "requires lambda = 0");
      if (!(*report.c > options.c_margin)) mode_mismatch(mode, "ergodic constant is not above the margin");
      break;
    case LtbMode::c_zero:
      if (problem.lambda != 0.0) mode_mismatch(mode, "requires lambda = 0");
      if (!(std::abs(*report.c) <= options.c_margin)) {
        mode_mismatch(mode, "ergodic constant is outside the margin");
      }
      break;
  }

  EvolutionOptions evo;
  evo.store_every = options.store_every;
  evo.max_dt = options.max_dt;
  const Trajectory traj = solve_evolution(problem, T, evo);
  report.times = traj.times;
  report.final_field = traj.fields.back();

  if (mode == LtbMode::steady) {
    ProblemSpec stat = problem;
    if (report.c) stat.ergodic_constant = report.c;
    StationaryOptions so;
    so.tol = options.tol;
    so.max_iter = options.max_iter;
    report.target = solve_stationary(stat, so).u;
    for (const GridFunction& u : traj.fields) {
      report.distance.push_back(sup_distance(u, report.target, 0.0));
    }
    report.kappa = kappa_curve(traj, report.target, 0.0);
  } else if (mode == LtbMode::ergodic_positive_c) {
    const double c = *report.c;
    report.target = pair->v;
    double shifted = 0.0;
    for (std::size_t k = 0; k < traj.snapshots(); ++k) {
      const GridFunction& u = traj.fields[k];
      const double shift = c * traj.times[k];
      const double K = mean_difference(u, report.target, shift);
      report.offsets.push_back(K);
      report.distance.push_back(sup_distance(u, report.target, K - shift));
      for (double v : u) shifted = std::max(shifted, std::abs(v + shift));
    }
    report.K = report.offsets.back();
    report.shifted_sup = shifted;
    report.kappa = kappa_curve(traj, report.target, c);

    // A bounded stationary solution would contradict c > 0; the sweep should
    // drift without settling.
    StationaryOptions so;
    so.tol = options.tol;
    so.max_iter = options.probe_max_iter;
    so.force_lambda_zero = true;
    try {
      solve_stationary(problem, so);
      report.stationary_diverged = false;
      report.stationary_message = "stationary solve converged";
    } catch (const ConvergenceError& e) {
      report.stationary_diverged = true;
      report.stationary_message = e.what();
    }
  } else {
    report.target = pair->v;
    const double K = mean_difference(traj.fields.back(), report.target, 0.0);
    report.K = K;
    for (const GridFunction& u : traj.fields) {
      report.distance.push_back(sup_distance(u, report.target, K));
    }
    report.kappa = kappa_curve(traj, report.target, *report.c);
    const std::size_t last = report.target.size() - 1;
    const std::array<double, 2> excess{report.target.front() + K - problem.phi.left(T),
                                       report.target[last] + K - problem.phi.right(T)};
    report.boundary_excess = excess;
    report.boundary_ok = excess[0] <= options.boundary_tol && excess[1] <= options.boundary_tol;
  }

  report.final_error = report.distance.back();
  report.kappa_monotone = report.kappa.max_upward_violation <= options.kappa_tol;

  // Late monotonicity of the distance curve: second half of the run.
  const std::size_t start = report.distance.size() / 2;
  double running_min = report.distance[start];
  for (std::size_t k = start + 1; k < report.distance.size(); ++k) {
    report.late_increase = std::max(report.late_increase, report.distance[k] - running_min);
    running_min = std::min(running_min, report.distance[k]);
  }
  report.distance_nonmonotone = report.late_increase > options.distance_tol;
  return report;
}

}  // namespace censolve
