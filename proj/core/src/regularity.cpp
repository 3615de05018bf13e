#include "censolve/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "censolve/error.hpp"
#include "censolve/stationary.hpp"

namespace censolve {

namespace {

void check_field(std::span<const double> u, const Grid& grid) {
  if (u.size() != grid.size()) throw ParameterError("field does not match the grid");
  for (double v : u) {
    if (!std::isfinite(v)) throw ParameterError("field contains non-finite values");
  }
}

/// max_i |u_{i+k} - u_i| for every offset k >= 1 (index 0 unused).
std::vector<double> offset_envelope(std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<double> env(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) m = std::max(m, std::abs(u[i + k] - u[i]));
    env[k] = m;
  }
  return env;
}

}  // namespace

double holder_seminorm(std::span<const double> u, const Grid& grid, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("Hoelder exponent must lie in (0, 1]");
  check_field(u, grid);
  const std::vector<double> env = offset_envelope(u);
  double best = 0.0;
  for (std::size_t k = 1; k < env.size(); ++k) {
    const double r = static_cast<double>(k) * grid.spacing();
    best = std::max(best, env[k] / std::pow(r, gamma));
  }
  return best;
}

GradientProfile gradient_weight_profile(std::span<const double> u, const Grid& grid, double sigma,
                                        double m) {
  check_field(u, grid);
  if (!(sigma > 0.0) || !(m > 0.0)) throw ParameterError("gradient weight needs sigma, m > 0");
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const double power = sigma / m;
  GradientProfile out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double slope;
    if (i == 1) {
      slope = (u[2] - u[1]) / h;
    } else if (i + 2 == n) {
      slope = (u[i] - u[i - 1]) / h;
    } else {
      slope = (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    const double value = std::abs(slope) * std::pow(grid.distance(i), power);
    out.nodes.push_back(i);
    out.values.push_back(value);
    if (value > out.max) {
      out.max = value;
      out.argmax = i;
    }
  }
  return out;
}

std::optional<double> fitted_exponent(std::span<const double> u, const Grid& grid) {
  check_field(u, grid);
  const std::vector<double> env = offset_envelope(u);
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const double L = static_cast<double>(n - 1) * h;

  // Bin b collects offsets with distance in (L 2^{-b-1}, L 2^{-b}]; each bin
  // contributes (largest distance, envelope over the bin).
  std::vector<std::pair<double, double>> points;
  for (int b = 0;; ++b) {
    const double upper = std::ldexp(L, -b);
    const double lower = std::ldexp(L, -b - 1);
    if (upper < h * (1.0 - 1e-12)) break;
    double envelope = 0.0;
    double r_max = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      const double r = static_cast<double>(k) * h;
      if (r > lower * (1.0 + 1e-12) && r <= upper * (1.0 + 1e-12)) {
        envelope = std::max(envelope, env[k]);
        r_max = std::max(r_max, r);
      }
    }
    if (r_max > 0.0 && envelope > 0.0) points.emplace_back(std::log(r_max), std::log(envelope));
  }
  if (points.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(points.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

RegularityReport regularity_report(std::span<const double> u, const ProblemSpec& problem,
                                   const RegularityOptions& options) {
  const Grid& grid = problem.grid;
  check_field(u, grid);
  const double sigma = problem.kernel.sigma();
  const double m = problem.m;

  RegularityReport report;
  report.lipschitz_seminorm = holder_seminorm(u, grid, 1.0);
  std::vector<double> gammas = options.gammas;
  if (m > sigma) gammas.push_back(std::min(1.0, (m - sigma) / m));
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  for (double g : gammas) report.holder.emplace_back(g, holder_seminorm(u, grid, g));

  report.fitted_exponent = fitted_exponent(u, grid);
  report.gradient_weight_max = gradient_weight_profile(u, grid, sigma, m).max;
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  report.oscillation = *hi - *lo;
  if (m > 1.0 && options.oscillation_bound) {
    report.oscillation_within_bound = report.oscillation <= *options.oscillation_bound;
  }
  return report;
}

double level_ratio(double a, double b) {
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  if (big <= 0.0) return 1.0;
  if (small <= 0.0) return std::numeric_limits<double>::infinity();
  return big / small;
}

RefinementStudy refinement_study(const std::function<ProblemSpec(int)>& make_problem,
                                 const std::vector<int>& levels, const RegularityOptions& options,
                                 double tol) {
  if (levels.empty()) throw ParameterError("refinement study needs at least one level");
  RefinementStudy study;
  for (int n : levels) {
    const ProblemSpec problem = make_problem(n);
    StationaryOptions so;
    so.tol = tol;
    const SolutionField sol = solve_stationary(problem, so);
    RefinementRow row;
    row.intervals = n;
    row.report = regularity_report(sol.u, problem, options);
    row.profile =
        gradient_weight_profile(sol.u, problem.grid, problem.kernel.sigma(), problem.m);
    study.rows.push_back(std::move(row));
  }
  for (std::size_t k = 1; k < study.rows.size(); ++k) {
    const RegularityReport& a = study.rows[k - 1].report;
    const RegularityReport& b = study.rows[k].report;
    study.lipschitz_ratio =
        std::max(study.lipschitz_ratio, level_ratio(a.lipschitz_seminorm, b.lipschitz_seminorm));
    study.gradient_weight_ratio = std::max(
        study.gradient_weight_ratio, level_ratio(a.gradient_weight_max, b.gradient_weight_max));
  }
  return study;
}

}  // namespace censolve
