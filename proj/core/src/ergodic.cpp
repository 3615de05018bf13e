#include "censolve/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "censolve/error.hpp"
#include "censolve/stationary.hpp"

namespace censolve {

namespace {

ProblemSpec state_constraint_copy(const ProblemSpec& problem, double lambda) {
  ProblemSpec copy = problem;
  copy.mode = BoundaryMode::state_constraint;
  copy.lambda = lambda;
  return copy;
}

DiscountedSolution discounted_sweep(const Scheme& scheme, double alpha,
                                    const ErgodicOptions& options, GridFunction initial,
                                    std::span<const double> rhs) {
  SweepSystem system;
  system.lambda = alpha;
  system.rhs.assign(rhs.begin(), rhs.end());
  system.mode = BoundaryMode::state_constraint;
  SweepOptions sweep;
  sweep.tol = options.tol;
  sweep.max_iter = options.max_iter;
  SweepOutcome out = gauss_seidel(scheme, system, std::move(initial), sweep);
  return {std::move(out.u), out.iterations, out.residual_norm};
}

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double spatial_mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::size_t resolve_x_star(const Grid& grid, const ErgodicOptions& options) {
  const std::size_t x_star = options.x_star.value_or(default_x_star(grid));
  if (x_star >= grid.size()) throw ParameterError("x_star index outside the grid");
  return x_star;
}

}  // namespace

std::size_t default_x_star(const Grid& grid) {
  const Domain1D& d = grid.domain();
  return grid.nearest_node(0.5 * (d.a + d.b));
}

DiscountedSolution solve_discounted(const ProblemSpec& problem, double alpha,
                                    const ErgodicOptions& options,
                                    std::optional<GridFunction> initial) {
  if (!(alpha > 0.0)) throw ParameterError("discount alpha must be positive");
  const Scheme scheme(state_constraint_copy(problem, alpha));
  GridFunction start = initial.value_or(GridFunction(problem.grid.size(), 0.0));
  return discounted_sweep(scheme, alpha, options, std::move(start), problem.f);
}

std::vector<double> halving_schedule(double alpha0, int levels) {
  if (!(alpha0 > 0.0) || levels < 1) throw ParameterError("invalid halving schedule");
  std::vector<double> out;
  for (int k = 0; k < levels; ++k) out.push_back(std::ldexp(alpha0, -k));
  return out;
}

ErgodicResult ergodic_constant_discount(const ProblemSpec& problem,
                                        const std::vector<double>& alpha_schedule,
                                        const ErgodicOptions& options) {
  if (alpha_schedule.size() < 3) {
    throw ParameterError("the discount schedule needs at least three levels");
  }
  for (std::size_t k = 0; k < alpha_schedule.size(); ++k) {
    if (!(alpha_schedule[k] > 0.0) || (k > 0 && !(alpha_schedule[k] < alpha_schedule[k - 1]))) {
      throw ParameterError("the discount schedule must be positive and strictly decreasing");
    }
  }
  problem.validate();

  ErgodicResult result;
  result.alpha_schedule = alpha_schedule;
  result.x_star_index = resolve_x_star(problem.grid, options);
  const std::size_t xs = result.x_star_index;

  const Scheme base(state_constraint_copy(problem, alpha_schedule.front()));
  GridFunction previous;
  double previous_alpha = 0.0;
  for (double alpha : alpha_schedule) {
    // Warm start: keep the relative profile, rescale the level so that
    // alpha u(x*) carries over.
    GridFunction start(problem.grid.size(), 0.0);
    if (!previous.empty()) {
      const double anchor = previous[xs];
      for (std::size_t i = 0; i < start.size(); ++i) {
        start[i] = (previous[i] - anchor) + previous_alpha / alpha * anchor;
      }
    }
    DiscountedSolution sol = discounted_sweep(base, alpha, options, std::move(start), problem.f);

    DiscountLevel level;
    level.alpha = alpha;
    level.c_alpha = -alpha * sol.u[xs];
    level.alpha_u_norm = alpha * sup_abs(sol.u);
    level.iterations = sol.iterations;
    level.residual_norm = sol.residual_norm;
    result.levels.push_back(level);

    previous = std::move(sol.u);
    previous_alpha = alpha;
  }

  // Least-squares line through the last three (alpha, c_alpha).
  const std::size_t k0 = result.levels.size() - 3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = k0; k < result.levels.size(); ++k) {
    const double x = result.levels[k].alpha;
    const double y = result.levels[k].c_alpha;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = 3.0 * sxx - sx * sx;
  result.fit_slope = (3.0 * sxy - sx * sy) / denom;
  result.c_discount = (sy - result.fit_slope * sx) / 3.0;
  double lo = result.levels[k0].c_alpha;
  double hi = lo;
  for (std::size_t k = k0; k < result.levels.size(); ++k) {
    const double y = result.levels[k].c_alpha;
    const double fit = result.c_discount + result.fit_slope * result.levels[k].alpha;
    result.fit_residual = std::max(result.fit_residual, std::abs(y - fit));
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  result.c_spread = hi - lo;
  result.spread_flagged = result.c_spread > options.spread_tol;

  for (std::size_t k = 1; k < result.levels.size(); ++k) {
    const double a = result.levels[k - 1].alpha_u_norm;
    const double b = result.levels[k].alpha_u_norm;
    const double big = std::max(a, b);
    const double small = std::min(a, b);
    if (big <= 1e-14) continue;
    const double ratio = small > 0.0 ? big / small : std::numeric_limits<double>::infinity();
    result.alpha_u_ratio = std::max(result.alpha_u_ratio, ratio);
  }
  result.alpha_u_bounded = result.alpha_u_ratio <= 2.0;

  result.u_infinity = previous;
  const double anchor = previous[xs];
  for (double& v : result.u_infinity) v -= anchor;
  result.u_infinity[xs] = 0.0;
  return result;
}

double ergodic_constant_slope(const ProblemSpec& problem, double T, double window, double max_dt) {
  if (!(window > 0.0) || !(T > window)) {
    throw ParameterError("slope estimate needs 0 < window < T");
  }
  ProblemSpec evo = state_constraint_copy(problem, 0.0);
  evo.u0.assign(problem.grid.size(), 0.0);
  const Scheme scheme(std::move(evo));

  GridFunction u(problem.grid.size(), 0.0);
  double t = 0.0;
  auto march_to = [&](double target) {
    while (t < target) {
      const double remaining = target - t;
      StepResult step = advance(scheme, u, t, std::min(max_dt, remaining));
      u = std::move(step.u);
      t = step.dt_used >= remaining ? target : t + step.dt_used;
    }
  };
  march_to(T - window);
  const double early = spatial_mean(u);
  march_to(T);
  const double late = spatial_mean(u);
  return -(late - early) / window;
}

ErgodicPair solve_ergodic_pair(const ProblemSpec& problem, const ErgodicOptions& options,
                               double mu, std::optional<GridFunction> initial) {
  if (!(mu > 0.0)) throw ParameterError("proximal weight must be positive");
  problem.validate();
  const Scheme scheme(state_constraint_copy(problem, mu));
  const std::size_t n = problem.grid.size();

  ErgodicPair pair;
  pair.x_star_index = resolve_x_star(problem.grid, options);
  const std::size_t xs = pair.x_star_index;
  pair.v = initial.value_or(GridFunction(n, 0.0));
  if (pair.v.size() != n) throw ParameterError("initial ergodic profile does not match the grid");
  {
    const double anchor = pair.v[xs];
    for (double& x : pair.v) x -= anchor;
  }

  GridFunction rhs(n);
  GridFunction w = pair.v;
  for (long outer = 1; outer <= options.max_iter; ++outer) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = problem.f[i] + mu * pair.v[i];
    // w from the previous pass sits one constant shift away from the answer.
    DiscountedSolution sol = discounted_sweep(scheme, mu, options, std::move(w), rhs);
    w = std::move(sol.u);
    const double anchor = w[xs];
    pair.c = -mu * anchor;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = w[i] - anchor;
      change = std::max(change, std::abs(next - pair.v[i]));
      pair.v[i] = next;
    }
    pair.v[xs] = 0.0;
    pair.outer_iterations = outer;
    if (change < options.tol) {
      pair.residual_norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        pair.residual_norm = std::max(
            pair.residual_norm, std::abs(scheme.residual(pair.v, i, 0.0, problem.f[i] + pair.c)));
      }
      return pair;
    }
  }
  throw ConvergenceError("relative-value iteration did not converge", pair.c, options.max_iter);
}

CoveringReport covering_sets(const KernelSpec& spec, const Grid& grid, std::size_t start,
                             int max_n) {
  return covering_sets(assemble_operator(spec, grid), start, max_n);
}

CoveringReport covering_sets(const DiscreteOperator& op, std::size_t start, int max_n) {
  const std::size_t n = op.size();
  if (start >= n) throw ParameterError("covering start index outside the grid");
  if (max_n < 0) throw ParameterError("max_n must be nonnegative");

  CoveringReport report;
  report.start = start;
  std::vector<char> member(n, 0);
  member[start] = 1;
  report.sets.push_back({start});
  if (n == 1) report.n_star = 0;

  for (int step = 1; step <= max_n && !report.n_star; ++step) {
    std::vector<char> next = member;
    for (std::size_t i = 0; i < n; ++i) {
      if (!member[i]) continue;
      for (const WeightEntry& e : op.entries(i)) next[e.index] = 1;
    }
    member = std::move(next);
    std::vector<std::size_t> set;
    for (std::size_t j = 0; j < n; ++j) {
      if (member[j]) set.push_back(j);
    }
    const bool full = set.size() == n;
    report.sets.push_back(std::move(set));
    if (full) report.n_star = step;
  }
  return report;
}

bool barrier_beta_admissible(double beta, double sigma, double m) {
  if (!(beta > 0.0)) return false;
  if (m > 1.0) return beta < std::min(1.0, (m - sigma) / (m - 1.0));
  return beta < sigma;
}

BarrierReport barrier_residual(const ProblemSpec& problem, double alpha,
                               std::optional<double> beta, double c1, double band_fraction) {
  if (!(alpha > 0.0)) throw ParameterError("barrier needs alpha > 0");
  if (!(c1 >= 0.0)) throw ParameterError("barrier constant C1 must be nonnegative");
  if (!(band_fraction > 0.0)) throw ParameterError("barrier band must be positive");
  if (beta && !barrier_beta_admissible(*beta, problem.kernel.sigma(), problem.m)) {
    std::ostringstream msg;
    msg << "barrier exponent beta = " << *beta << " outside the admissible range";
    throw ParameterError(msg.str());
  }
  problem.validate();
  const Scheme scheme(state_constraint_copy(problem, alpha));
  const Grid& grid = problem.grid;
  const std::size_t n = grid.size();
  const double f_norm = sup_abs(problem.f);

  // psi without its C1 part; the residual is affine in C1 with slope 2.
  GridFunction psi(n, 2.0 / alpha * f_norm);
  if (beta) {
    for (std::size_t i = 0; i < n; ++i) psi[i] -= std::pow(grid.distance(i), *beta);
  }

  BarrierReport report;
  report.beta = beta;
  report.alpha = alpha;
  report.c1 = c1;
  const double band = band_fraction * grid.domain().length();
  double base_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (grid.distance(i) > band) continue;
    const double r0 = scheme.residual(psi, i, alpha, problem.f[i]);
    report.nodes.push_back(i);
    report.residuals.push_back(r0 + 2.0 * c1);
    if (r0 < base_min) {
      base_min = r0;
      report.argmin = i;
    }
  }
  if (report.nodes.empty()) throw ParameterError("barrier band contains no interior nodes");
  report.min_residual = base_min + 2.0 * c1;
  report.certified_c1 = std::max(0.0, -base_min / 2.0);
  return report;
}

}  // namespace censolve
