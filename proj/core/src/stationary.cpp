#include "censolve/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "censolve/error.hpp"

namespace censolve {

namespace {

double boundary_residual(double equation, double value, double phi) {
  if (value < phi) return std::abs(equation);
  return std::max(value - phi, std::max(0.0, equation));
}

}  // namespace

GridFunction system_residuals(const Scheme& scheme, const SweepSystem& system,
                              std::span<const double> u) {
  const std::size_t n = u.size();
  GridFunction res(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eq = scheme.residual(u, i, system.lambda, system.rhs[i]);
    if (system.mode == BoundaryMode::dirichlet && (i == 0 || i + 1 == n)) {
      res[i] = boundary_residual(eq, u[i], system.phi[i == 0 ? 0 : 1]);
    } else {
      res[i] = std::abs(eq);
    }
  }
  return res;
}

SweepOutcome gauss_seidel(const Scheme& scheme, const SweepSystem& system, GridFunction initial,
                          const SweepOptions& options) {
  const std::size_t n = scheme.grid().size();
  if (initial.size() != n || system.rhs.size() != n) {
    throw ParameterError("gauss_seidel: size mismatch between grid, rhs and initial guess");
  }
  SweepOutcome out;
  out.u = std::move(initial);
  GridFunction& u = out.u;
  const bool dirichlet = system.mode == BoundaryMode::dirichlet;
  const bool shift = options.shift_correction && !dirichlet && system.lambda > 0.0;

  auto update = [&](std::size_t i) {
    double next = scheme.solve_node(u, i, system.lambda, system.rhs[i]);
    if (dirichlet && (i == 0 || i + 1 == n)) next = std::min(system.phi[i == 0 ? 0 : 1], next);
    const double delta = std::abs(next - u[i]);
    u[i] = next;
    return delta;
  };

  for (long iter = 1; iter <= options.max_iter; ++iter) {
    double max_update = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_update = std::max(max_update, update(i));
    for (std::size_t k = n; k-- > 0;) max_update = std::max(max_update, update(k));

    if (shift) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mean += scheme.residual(u, i, system.lambda, system.rhs[i]);
      }
      mean /= static_cast<double>(n);
      const double s = -mean / system.lambda;
      for (double& v : u) v += s;
      max_update = std::max(max_update, std::abs(s));
    }

    out.iterations = iter;
    out.last_update = max_update;
    if (!std::isfinite(max_update)) {
      throw ConvergenceError("Gauss-Seidel iterates became non-finite", max_update, iter);
    }
    if (max_update < options.tol) {
      const GridFunction res = system_residuals(scheme, system, u);
      out.residual_norm = *std::max_element(res.begin(), res.end());
      if (out.residual_norm <= options.tol) return out;
    }
  }
  const GridFunction res = system_residuals(scheme, system, u);
  const double final_res = *std::max_element(res.begin(), res.end());
  std::ostringstream msg;
  msg << "Gauss-Seidel did not converge in " << options.max_iter
      << " iterations (last update " << out.last_update << ", residual " << final_res << ")";
  throw ConvergenceError(msg.str(), final_res, options.max_iter);
}

SweepSystem stationary_system(const ProblemSpec& problem, double t) {
  SweepSystem system;
  system.lambda = problem.lambda;
  system.rhs = problem.f;
  system.mode = problem.mode;
  system.phi = {problem.phi.left(t), problem.phi.right(t)};
  return system;
}

SolutionField solve_stationary(const ProblemSpec& problem, const StationaryOptions& options) {
  return solve_stationary(Scheme(problem), options);
}

SolutionField solve_stationary(const Scheme& scheme, const StationaryOptions& options) {
  const ProblemSpec& problem = scheme.problem();
  if (problem.mode == BoundaryMode::state_constraint && !(problem.lambda > 0.0)) {
    throw ParameterError("state-constraint stationary solves need lambda > 0");
  }
  if (problem.mode == BoundaryMode::dirichlet && !(problem.lambda > 0.0) &&
      !options.force_lambda_zero) {
    if (!problem.ergodic_constant ||
        !(*problem.ergodic_constant < -options.strictness_margin)) {
      throw ParameterError(
          "lambda = 0 Dirichlet solves need a negative ergodic constant certificate");
    }
  }
  if (!(options.tol > 0.0)) throw ParameterError("tolerance must be positive");

  const SweepSystem system = stationary_system(problem);
  GridFunction initial = options.initial.value_or(GridFunction(problem.grid.size(), 0.0));
  SweepOptions sweep;
  sweep.tol = options.tol;
  sweep.max_iter = options.max_iter;
  SweepOutcome outcome = gauss_seidel(scheme, system, std::move(initial), sweep);

  SolutionField field;
  field.u = std::move(outcome.u);
  field.residual = system_residuals(scheme, system, field.u);
  field.residual_norm = *std::max_element(field.residual.begin(), field.residual.end());
  field.iterations = outcome.iterations;
  if (problem.mode == BoundaryMode::dirichlet) {
    field.boundary_loss = detect_boundary_loss(scheme, field, options.tol).lost;
  }
  return field;
}

BoundaryLossReport detect_boundary_loss(const Scheme& scheme, const SolutionField& solution,
                                        double tol) {
  const ProblemSpec& problem = scheme.problem();
  const std::size_t n = problem.grid.size();
  if (solution.u.size() != n) throw ParameterError("solution does not match the grid");
  BoundaryLossReport report;
  const std::array<std::size_t, 2> nodes{0, n - 1};
  for (int side = 0; side < 2; ++side) {
    const std::size_t i = nodes[side];
    const double phi = side == 0 ? problem.phi.left(0.0) : problem.phi.right(0.0);
    const double eq = scheme.residual(solution.u, i, problem.lambda, problem.f[i]);
    report.value[side] = solution.u[i];
    report.phi[side] = phi;
    report.equation_residual[side] = eq;
    report.lost[side] = solution.u[i] < phi - tol && std::abs(eq) <= tol;
    if (solution.u[i] > phi + tol) report.subsolution_ok = false;
  }
  return report;
}

}  // namespace censolve
