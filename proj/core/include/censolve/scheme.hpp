#pragma once

#include <span>

#include "censolve/discretize.hpp"
#include "censolve/problem.hpp"

namespace censolve {

/// Monotone discretization of a ProblemSpec: the assembled nonlocal operator
/// plus the upwind gradient term. Node residuals take the zero-order
/// coefficient and the right-hand side explicitly so that discounted and
/// proximal variants can reuse one instance.
class Scheme {
 public:
  explicit Scheme(ProblemSpec problem);
  Scheme(ProblemSpec problem, DiscreteOperator op);

  const ProblemSpec& problem() const noexcept { return problem_; }
  const Grid& grid() const noexcept { return problem_.grid; }
  const DiscreteOperator& op() const noexcept { return op_; }

  /// b_i * (upwind slope)^m.
  double hamiltonian(std::span<const double> u, std::size_t i) const;

  /// lambda u_i - I_h(u)_i + b_i H_i(u) - rhs.
  double residual(std::span<const double> u, std::size_t i, double lambda, double rhs) const;

  /// Root in u_i of residual(.) = 0 with every other entry frozen. The
  /// bracket comes from the slope bound lambda + W_i and is shrunk by a
  /// bracketing solver (TOMS 748) to full double precision.
  double solve_node(std::span<const double> u, std::size_t i, double lambda, double rhs) const;

  /// Largest dt keeping the explicit step order-preserving at u:
  /// 1 / max_i (lambda + W_i + b_i m P_i^{m-1} 2/h).
  double monotone_step_limit(std::span<const double> u, double lambda) const;

 private:
  ProblemSpec problem_;
  DiscreteOperator op_;
};

}  // namespace censolve
