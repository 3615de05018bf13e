#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "censolve/problem.hpp"
#include "censolve/scheme.hpp"

namespace censolve {

struct StepResult {
  GridFunction u;
  double dt_used = 0.0;
  double step_limit = 0.0;  // monotone bound before the 0.9 safety factor
};

/// One explicit monotone Euler step of u_t + lambda u - I(u) + b |Du|^m = f
/// from time t. dt_used = min(requested_dt, 0.9 * monotone_step_limit(u)).
/// Dirichlet boundary nodes take min(phi_b(t + dt), own explicit update).
/// Throws ConvergenceError when dt_used collapses below 1e-12.
StepResult advance(const Scheme& scheme, std::span<const double> u, double t, double requested_dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> fields;
  /// Per explicit step: the step taken and the monotone bound it respected.
  std::vector<double> dt_used;
  std::vector<double> step_limit;

  std::size_t snapshots() const noexcept { return times.size(); }
};

struct EvolutionOptions {
  /// Snapshot spacing in time (snapshots at k * store_every and at T).
  double store_every = 0.1;
  double max_dt = std::numeric_limits<double>::infinity();
};

/// Marches from u0 at t = 0 to T. Dirichlet mode requires the compatibility
/// condition; state-constraint mode ignores phi.
Trajectory solve_evolution(const Scheme& scheme, double T, const EvolutionOptions& options = {});
Trajectory solve_evolution(const ProblemSpec& problem, double T,
                           const EvolutionOptions& options = {});

/// u^gamma(x, t) = max over stored s of u(x, s) - (s - t)^2 / gamma.
Trajectory sup_convolution_time(const Trajectory& trajectory, double gamma);

struct KappaCurve {
  std::vector<double> times;
  std::vector<double> kappa;
  /// max_k (kappa_k - min_{j<k} kappa_j), clipped at 0.
  double max_upward_violation = 0.0;
};

/// kappa(t_k) = max_i (u(x_i, t_k) + drift * t_k - v_i).
KappaCurve kappa_curve(const Trajectory& u, std::span<const double> v, double drift = 0.0);
/// kappa(t_k) = max_i (u(x_i, t_k) - v(x_i, t_k)) on matching snapshot times.
KappaCurve kappa_curve(const Trajectory& u, const Trajectory& v);

struct LinfBoundReport {
  double max_abs = 0.0;
  /// max over snapshots of |u| - ((|f|_inf) t + |phi|_inf + |u0|_inf); <= 0 when the bound holds.
  double growth_excess = 0.0;
  /// Same against |f|_inf / lambda + |phi|_inf + |u0|_inf; only for lambda > 0.
  std::optional<double> uniform_excess;
};

/// Checks the a priori sup-norm bounds of the evolution problem
/// (H(x, 0, 0) = 0 for this Hamiltonian).
LinfBoundReport check_linf_bounds(const ProblemSpec& problem, const Trajectory& trajectory);

/// max over consecutive snapshots of max_i |u(x_i, t_{k+1}) - u(x_i, t_k)| / (t_{k+1} - t_k).
double time_lipschitz_constant(const Trajectory& trajectory);

}  // namespace censolve
