#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "censolve/discretize.hpp"
#include "censolve/kernels.hpp"

namespace censolve {

enum class BoundaryMode { dirichlet, state_constraint };

std::string_view to_string(BoundaryMode mode) noexcept;
std::optional<BoundaryMode> parse_boundary_mode(std::string_view name) noexcept;

enum class Side { left = 0, right = 1 };

/// Boundary data phi(x_b, t) at the two end points.
struct BoundaryData {
  std::function<double(double)> left = [](double) { return 0.0; };
  std::function<double(double)> right = [](double) { return 0.0; };

  static BoundaryData constant(double left_value, double right_value);
  double at(Side side, double t) const { return side == Side::left ? left(t) : right(t); }
};

/// lambda u - I(u) + b(x) |Du|^m = f(x) on a grid, with generalized Dirichlet
/// or state-constraint boundary behaviour. u0 is only read by evolution solvers.
struct ProblemSpec {
  ProblemSpec(KernelSpec kernel_spec, Grid grid_spec);

  KernelSpec kernel;
  Grid grid;
  double lambda = 1.0;
  GridFunction b;  // b_i > 0
  double m = 2.0;  // m > sigma
  GridFunction f;
  BoundaryData phi;
  GridFunction u0;
  BoundaryMode mode = BoundaryMode::dirichlet;
  /// Ergodic constant certificate; lambda = 0 Dirichlet solves need c < 0.
  std::optional<double> ergodic_constant;

  /// Range and size checks shared by every solver; throws ParameterError.
  void validate() const;
  /// u0 = phi(., 0) at both boundary nodes to 1e-12 (Dirichlet mode only).
  void validate_compatibility() const;
};

}  // namespace censolve
