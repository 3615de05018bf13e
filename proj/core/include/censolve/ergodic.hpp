#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "censolve/parabolic.hpp"
#include "censolve/problem.hpp"
#include "censolve/scheme.hpp"

namespace censolve {

struct ErgodicOptions {
  double tol = 1e-10;
  long max_iter = 200000;
  /// Reference node for the normalization u_inf(x*) = 0; defaults to the
  /// node nearest the domain midpoint.
  std::optional<std::size_t> x_star;
  /// Flag threshold for the spread of c_alpha over the fitted levels.
  double spread_tol = 5e-2;
};

std::size_t default_x_star(const Grid& grid);

struct DiscountedSolution {
  GridFunction u;
  long iterations = 0;
  double residual_norm = 0.0;
};

/// alpha u - I(u) + b |Du|^m = f with state constraints at both ends.
DiscountedSolution solve_discounted(const ProblemSpec& problem, double alpha,
                                    const ErgodicOptions& options = {},
                                    std::optional<GridFunction> initial = std::nullopt);

struct DiscountLevel {
  double alpha = 0.0;
  double c_alpha = 0.0;       // -alpha u_alpha(x*)
  double alpha_u_norm = 0.0;  // sup |alpha u_alpha|
  long iterations = 0;
  double residual_norm = 0.0;
};

struct ErgodicResult {
  double c_discount = 0.0;
  std::optional<double> c_slope;
  GridFunction u_infinity;
  std::vector<double> alpha_schedule;
  std::size_t x_star_index = 0;
  std::vector<DiscountLevel> levels;
  /// Linear fit c_alpha ~ c_discount + slope * alpha over the last three levels.
  double fit_slope = 0.0;
  double fit_residual = 0.0;
  double c_spread = 0.0;
  bool spread_flagged = false;
  /// max ratio of consecutive sup |alpha u_alpha|, and whether it stays <= 2.
  double alpha_u_ratio = 1.0;
  bool alpha_u_bounded = true;
};

/// Vanishing-discount estimate of the ergodic constant. The schedule must be
/// strictly decreasing and positive; at least three levels are needed for the
/// extrapolation.
ErgodicResult ergodic_constant_discount(const ProblemSpec& problem,
                                        const std::vector<double>& alpha_schedule,
                                        const ErgodicOptions& options = {});

/// Halving schedule alpha0 * 2^-k, k = 0..levels-1.
std::vector<double> halving_schedule(double alpha0, int levels);

/// -(mean u(., T) - mean u(., T - window)) / window for the lambda = 0
/// state-constraint evolution from u0 = 0.
double ergodic_constant_slope(const ProblemSpec& problem, double T, double window,
                              double max_dt = std::numeric_limits<double>::infinity());

struct ErgodicPair {
  double c = 0.0;
  GridFunction v;  // v(x*) = 0
  std::size_t x_star_index = 0;
  long outer_iterations = 0;
  double residual_norm = 0.0;  // sup |-I(v) + b|Dv|^m - f - c|
};

/// Discrete ergodic pair by proximal relative-value iteration: solve
/// mu w - I(w) + b|Dw|^m = f + mu v, set c = -mu w(x*), v <- w - w(x*).
ErgodicPair solve_ergodic_pair(const ProblemSpec& problem, const ErgodicOptions& options = {},
                               double mu = 1.0,
                               std::optional<GridFunction> initial = std::nullopt);

struct CoveringReport {
  std::size_t start = 0;
  std::vector<std::vector<std::size_t>> sets;  // X_0, X_1, ...
  std::optional<int> n_star;
  bool failed() const noexcept { return !n_star.has_value(); }
};

CoveringReport covering_sets(const KernelSpec& spec, const Grid& grid, std::size_t start,
                             int max_n);
CoveringReport covering_sets(const DiscreteOperator& op, std::size_t start, int max_n);

struct BarrierReport {
  std::optional<double> beta;
  double alpha = 0.0;
  double c1 = 0.0;
  double min_residual = 0.0;
  std::size_t argmin = 0;
  /// Smallest C1 >= 0 that makes the minimum residual nonnegative.
  double certified_c1 = 0.0;
  std::vector<std::size_t> nodes;
  std::vector<double> residuals;
};

/// Admissible range for the barrier exponent.
bool barrier_beta_admissible(double beta, double sigma, double m);

/// Discrete supersolution residual of psi = 2/alpha (|f| + C1) - d^beta on
/// interior nodes with d <= band_fraction * |Omega|. Without beta the barrier
/// is the constant part alone.
BarrierReport barrier_residual(const ProblemSpec& problem, double alpha,
                               std::optional<double> beta, double c1 = 0.0,
                               double band_fraction = 0.25);

}  // namespace censolve
