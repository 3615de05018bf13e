#include "censolve/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "censolve/error.hpp"

namespace censolve {

std::string_view to_string(BoundaryMode mode) noexcept {
  return mode == BoundaryMode::dirichlet ? "dirichlet" : "state-constraint";
}

std::optional<BoundaryMode> parse_boundary_mode(std::string_view name) noexcept {
  if (name == "dirichlet") return BoundaryMode::dirichlet;
  if (name == "state-constraint") return BoundaryMode::state_constraint;
  return std::nullopt;
}

BoundaryData BoundaryData::constant(double left_value, double right_value) {
  BoundaryData data;
  data.left = [left_value](double) { return left_value; };
  data.right = [right_value](double) { return right_value; };
  return data;
}

ProblemSpec::ProblemSpec(KernelSpec kernel_spec, Grid grid_spec)
    : kernel(std::move(kernel_spec)),
      grid(grid_spec),
      b(grid.size(), 1.0),
      f(grid.size(), 0.0),
      u0(grid.size(), 0.0) {}

namespace {

void require_size(const GridFunction& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << name << " has " << v.size() << " entries but the grid has " << n << " nodes";
    throw ParameterError(msg.str());
  }
  for (double value : v) {
    if (!std::isfinite(value)) throw ParameterError(std::string(name) + " has non-finite entries");
  }
}

}  // namespace

void ProblemSpec::validate() const {
  if (!(kernel.domain() == grid.domain())) {
    throw ParameterError("kernel and grid live on different domains");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be >= 0");
  if (!(m > kernel.sigma()) || !std::isfinite(m)) {
    throw ParameterError("gradient exponent m must exceed sigma");
  }
  require_size(b, grid.size(), "b");
  require_size(f, grid.size(), "f");
  require_size(u0, grid.size(), "u0");
  for (double bi : b) {
    if (!(bi > 0.0)) throw ParameterError("b must be positive at every node");
  }
  if (!phi.left || !phi.right) throw ParameterError("boundary data is not set");
}

void ProblemSpec::validate_compatibility() const {
  if (mode != BoundaryMode::dirichlet) return;
  const double left_gap = std::abs(u0.front() - phi.left(0.0));
  const double right_gap = std::abs(u0.back() - phi.right(0.0));
  if (left_gap > 1e-12 || right_gap > 1e-12) {
    throw ParameterError("compatibility condition u0 = phi(., 0) fails on the boundary");
  }
}

Scheme::Scheme(ProblemSpec problem) : problem_(std::move(problem)) {
  problem_.validate();
  op_ = assemble_operator(problem_.kernel, problem_.grid);
}

Scheme::Scheme(ProblemSpec problem, DiscreteOperator op)
    : problem_(std::move(problem)), op_(std::move(op)) {
  problem_.validate();
  if (op_.size() != problem_.grid.size()) {
    throw ParameterError("operator size does not match the grid");
  }
}

double Scheme::hamiltonian(std::span<const double> u, std::size_t i) const {
  const double slope = upwind_slope(u, i, grid().spacing());
  return slope > 0.0 ? problem_.b[i] * std::pow(slope, problem_.m) : 0.0;
}

double Scheme::residual(std::span<const double> u, std::size_t i, double lambda,
                        double rhs) const {
  return lambda * u[i] - op_.apply(u, i) + hamiltonian(u, i) - rhs;
}

double Scheme::solve_node(std::span<const double> u, std::size_t i, double lambda,
                          double rhs) const {
  const double h = grid().spacing();
  const double b = problem_.b[i];
  const double m = problem_.m;
  const double diag = lambda + op_.row_sum(i);
  const double offdiag = op_.weighted_sum(u, i);

  // The upwind slope at i is (s - lowest neighbour)^+ / h.
  double floor_value = std::numeric_limits<double>::infinity();
  if (i > 0) floor_value = std::min(floor_value, u[i - 1]);
  if (i + 1 < u.size()) floor_value = std::min(floor_value, u[i + 1]);

  auto eval = [&](double s) {
    const double rise = s - floor_value;
    const double grad = rise > 0.0 ? b * std::pow(rise / h, m) : 0.0;
    return diag * s - offdiag + grad - rhs;
  };

  // Below the neighbours the equation is linear.
  if (diag > 0.0) {
    const double linear_root = (offdiag + rhs) / diag;
    if (linear_root <= floor_value) return linear_root;
  }

  // Bracket: eval is increasing with slope >= diag.
  double lo = u[i];
  double hi = u[i];
  const double r = eval(u[i]);
  if (r == 0.0) return u[i];
  if (diag > 0.0) {
    const double other = u[i] - r / diag;
    lo = std::min(u[i], other);
    hi = std::max(u[i], other);
    // The root lies above the linear branch's end.
    if (std::isfinite(floor_value)) lo = std::max(lo, std::min(floor_value, hi));
  } else {
    double step = std::max(1.0, std::abs(r));
    int widen = 0;
    if (r > 0.0) {
      while (eval(lo) > 0.0) {
        lo = u[i] - step;
        step *= 2.0;
        if (++widen > 80) throw ConvergenceError("node equation has no root below", r, widen);
      }
    } else {
      while (eval(hi) < 0.0) {
        hi = u[i] + step;
        step *= 2.0;
        if (++widen > 80) throw ConvergenceError("node equation has no root above", r, widen);
      }
    }
  }

  const double f_lo = eval(lo);
  const double f_hi = eval(hi);
  if (f_lo >= 0.0) return lo;
  if (f_hi <= 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      eval, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(), max_iter);
  return bracket.first + 0.5 * (bracket.second - bracket.first);
}

double Scheme::monotone_step_limit(std::span<const double> u, double lambda) const {
  const double h = grid().spacing();
  const double m = problem_.m;
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double slope = 0.0;
    if (i > 0) slope = std::max(slope, std::abs(u[i] - u[i - 1]) / h);
    if (i + 1 < u.size()) slope = std::max(slope, std::abs(u[i] - u[i + 1]) / h);
    // p^{m-1} is unbounded near p = 0 when m < 1; cap the factor at slope 1.
    if (m < 1.0) slope = std::max(slope, 1.0);
    const double grad = problem_.b[i] * m * std::pow(slope, m - 1.0) * 2.0 / h;
    worst = std::max(worst, lambda + op_.row_sum(i) + grad);
  }
  return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

}  // namespace censolve
