#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "censolve/discretize.hpp"
#include "censolve/problem.hpp"

namespace censolve {

/// max over all node pairs of |u_i - u_j| / |x_i - x_j|^gamma, 0 < gamma <= 1.
double holder_seminorm(std::span<const double> u, const Grid& grid, double gamma);

struct GradientProfile {
  std::vector<std::size_t> nodes;  // interior nodes 1..N-1
  std::vector<double> values;      // |D_h u(x_i)| d(x_i)^{sigma/m}
  double max = 0.0;
  std::size_t argmax = 0;
};

GradientProfile gradient_weight_profile(std::span<const double> u, const Grid& grid, double sigma,
                                        double m);

/// Slope of log(envelope) against log(distance) over dyadic distance bins;
/// empty when fewer than two bins carry a nonzero envelope.
std::optional<double> fitted_exponent(std::span<const double> u, const Grid& grid);

struct RegularityOptions {
  /// Extra Hoelder exponents; (m - sigma)/m is always included when m > sigma.
  std::vector<double> gammas;
  /// Recorded oscillation constant to compare against (m > 1 only).
  std::optional<double> oscillation_bound;
};

struct RegularityReport {
  double lipschitz_seminorm = 0.0;
  std::vector<std::pair<double, double>> holder;  // (gamma, seminorm), gamma ascending
  std::optional<double> fitted_exponent;
  double gradient_weight_max = 0.0;
  double oscillation = 0.0;
  std::optional<bool> oscillation_within_bound;
};

RegularityReport regularity_report(std::span<const double> u, const ProblemSpec& problem,
                                   const RegularityOptions& options = {});

struct RefinementRow {
  int intervals = 0;
  RegularityReport report;
  GradientProfile profile;
};

struct RefinementStudy {
  std::vector<RefinementRow> rows;
  /// Largest ratio between consecutive levels (max/min) of each quantity.
  double lipschitz_ratio = 1.0;
  double gradient_weight_ratio = 1.0;
};

/// Solves the stationary problem built by `make_problem(N)` for each N and
/// tabulates the estimators.
RefinementStudy refinement_study(const std::function<ProblemSpec(int)>& make_problem,
                                 const std::vector<int>& levels,
                                 const RegularityOptions& options = {}, double tol = 1e-10);

/// max / min of two nonnegative values, 1 when both vanish.
double level_ratio(double a, double b);

}  // namespace censolve
