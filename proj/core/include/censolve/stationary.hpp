#pragma once

#include <array>
#include <optional>

#include "censolve/problem.hpp"
#include "censolve/scheme.hpp"

namespace censolve {

/// One nonlinear system lambda u - I_h(u) + b H(u) = rhs handed to the sweep solver.
struct SweepSystem {
  double lambda = 1.0;
  GridFunction rhs;
  BoundaryMode mode = BoundaryMode::dirichlet;
  std::array<double, 2> phi{0.0, 0.0};  // used in Dirichlet mode
};

struct SweepOptions {
  double tol = 1e-10;
  long max_iter = 200000;
  /// In state-constraint mode the scheme commutes with constant shifts up to
  /// the lambda term, so the mean residual can be removed exactly after each
  /// iteration. This is what keeps small-discount solves affordable.
  bool shift_correction = true;
};

struct SweepOutcome {
  GridFunction u;
  long iterations = 0;
  double last_update = 0.0;
  double residual_norm = 0.0;
};

/// Nonlinear Gauss-Seidel on the monotone scheme. One iteration is an
/// ascending sweep followed by a descending sweep. Interior nodes solve their
/// scalar equation; Dirichlet boundary nodes take min(phi_b, state-constraint
/// root); state-constraint boundary nodes take the root. Stops once the
/// sup-norm update and the residual are both below tol.
/// Throws ConvergenceError after max_iter iterations.
SweepOutcome gauss_seidel(const Scheme& scheme, const SweepSystem& system, GridFunction initial,
                          const SweepOptions& options);

/// Per-node generalized residual of a sweep system.
GridFunction system_residuals(const Scheme& scheme, const SweepSystem& system,
                              std::span<const double> u);

struct StationaryOptions {
  double tol = 1e-10;
  long max_iter = 200000;
  /// Attempt a lambda = 0 Dirichlet solve without a negative ergodic
  /// certificate (used to exhibit non-existence).
  bool force_lambda_zero = false;
  /// A lambda = 0 certificate is accepted when c < -strictness_margin.
  double strictness_margin = 0.0;
  std::optional<GridFunction> initial;
};

struct SolutionField {
  GridFunction u;
  GridFunction residual;  // per node, generalized at the boundary
  double residual_norm = 0.0;
  long iterations = 0;
  std::array<bool, 2> boundary_loss{false, false};
};

SweepSystem stationary_system(const ProblemSpec& problem, double t = 0.0);

/// Solves lambda u - I(u) + b |Du|^m = f with the problem's boundary mode.
SolutionField solve_stationary(const ProblemSpec& problem, const StationaryOptions& options = {});
SolutionField solve_stationary(const Scheme& scheme, const StationaryOptions& options = {});

struct BoundaryLossReport {
  std::array<bool, 2> lost{false, false};
  std::array<double, 2> value{0.0, 0.0};
  std::array<double, 2> phi{0.0, 0.0};
  std::array<double, 2> equation_residual{0.0, 0.0};
  /// u_b <= phi_b + tol at both ends.
  bool subsolution_ok = true;
};

/// Boundary node b is flagged when u_b < phi_b - tol while its own equation
/// (one-sided row, interior upwind slope) holds to tol.
BoundaryLossReport detect_boundary_loss(const Scheme& scheme, const SolutionField& solution,
                                        double tol);

}  // namespace censolve
