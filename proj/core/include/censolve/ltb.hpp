#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "censolve/ergodic.hpp"
#include "censolve/parabolic.hpp"
#include "censolve/problem.hpp"

namespace censolve {

enum class LtbMode { steady, ergodic_positive_c, c_zero };

std::string_view to_string(LtbMode mode);
LtbMode parse_ltb_mode(std::string_view text);

struct LtbOptions {
  double store_every = 0.1;
  double max_dt = std::numeric_limits<double>::infinity();
  /// Tolerance for the stationary and ergodic solves feeding the targets.
  double tol = 1e-11;
  long max_iter = 200000;
  /// Mode selection margin on the ergodic constant.
  double c_margin = 0.1;
  double kappa_tol = 1e-6;
  double boundary_tol = 1e-6;
  /// Allowed late increase of the distance curve.
  double distance_tol = 1e-8;
  /// Iteration budget for the nonexistence probe in ergodic-positive-c mode.
  long probe_max_iter = 5000;
  ErgodicOptions ergodic;
};

struct LtbReport {
  LtbMode mode = LtbMode::steady;
  std::vector<double> times;
  std::vector<double> distance;
  /// Ergodic constant used for the mode check (absent in lambda > 0 steady mode).
  std::optional<double> c;
  /// K_k per snapshot (ergodic-positive-c) and the fitted K.
  std::vector<double> offsets;
  std::optional<double> K;
  double final_error = 0.0;
  GridFunction target;      // u_stat, or u_inf (without K)
  GridFunction final_field; // u(., T)
  KappaCurve kappa;
  bool kappa_monotone = true;
  double late_increase = 0.0;
  bool distance_nonmonotone = false;
  /// sup_k |u(., t_k) + c t_k|_inf in ergodic-positive-c mode.
  std::optional<double> shifted_sup;
  /// Outcome of the lambda = 0 stationary attempt in ergodic-positive-c mode.
  std::optional<bool> stationary_diverged;
  std::string stationary_message;
  /// u_inf + K - phi at both boundary nodes (c-zero mode).
  std::optional<std::array<double, 2>> boundary_excess;
  bool boundary_ok = true;
};

/// Runs the Cauchy-Dirichlet evolution of `problem` to T and measures its
/// distance to the predicted large-time limit. Throws ParameterError when the
/// mode does not match the problem (lambda, sign of c against the margin).
LtbReport run_ltb(const ProblemSpec& problem, LtbMode mode, double T,
                  const LtbOptions& options = {});

}  // namespace censolve
