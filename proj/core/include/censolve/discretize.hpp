#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "censolve/kernels.hpp"

namespace censolve {

using GridFunction = std::vector<double>;

/// Uniform grid x_i = a + i h, i = 0..N.
class Grid {
 public:
  Grid(Domain1D domain, int intervals);

  const Domain1D& domain() const noexcept { return domain_; }
  int intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(intervals_) + 1; }
  double spacing() const noexcept { return h_; }
  double node(std::size_t i) const noexcept;
  double distance(std::size_t i) const noexcept { return domain_.distance(node(i)); }
  bool is_boundary(std::size_t i) const noexcept { return i == 0 || i + 1 == size(); }
  std::size_t nearest_node(double x) const;
  std::vector<double> nodes() const;

  /// Samples f at every node.
  GridFunction sample(const std::function<double(double)>& f) const;

 private:
  Domain1D domain_;
  int intervals_;
  double h_;
};

struct WeightEntry {
  std::size_t index;
  double weight;
};

/// Contiguous slice of one operator row: weights[k] is w_{i, first + k}.
/// Zero entries (including the diagonal) may appear inside the slice.
struct RowView {
  std::size_t first = 0;
  std::span<const double> weights;

  std::size_t last() const noexcept { return first + weights.size(); }  // one past the end
};

/// Rows of nonnegative weights realizing I_h(u, x_i) = sum_j w_ij (u_j - u_i).
/// Each row is stored densely over the hull of its support.
class DiscreteOperator {
 public:
  DiscreteOperator() = default;
  DiscreteOperator(const std::vector<std::vector<WeightEntry>>& rows, double sigma, double c_norm);

  std::size_t size() const noexcept { return row_sums_.size(); }
  RowView row(std::size_t i) const noexcept {
    return {firsts_[i], {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]}};
  }
  /// Nonzero (j, w_ij) pairs of row i in increasing j.
  std::vector<WeightEntry> entries(std::size_t i) const;
  double weight(std::size_t i, std::size_t j) const noexcept;
  /// W_i = sum_j w_ij.
  double row_sum(std::size_t i) const noexcept { return row_sums_[i]; }
  double sigma() const noexcept { return sigma_; }
  double c_norm() const noexcept { return c_norm_; }

  /// sum_j w_ij u_j (the diagonal weight is always zero).
  double weighted_sum(std::span<const double> u, std::size_t i) const noexcept;
  // Sums w_ij (u_j - u_i), so constants are annihilated exactly.
  double apply(std::span<const double> u, std::size_t i) const noexcept;
  GridFunction apply(std::span<const double> u) const;

  /// Dense (N+1)x(N+1) copy, unscaled: row i, column j holds w_ij / c_norm.
  std::vector<std::vector<double>> dense_table() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> firsts_;
  std::vector<double> weights_;
  std::vector<double> row_sums_;
  double sigma_ = 0.0;
  double c_norm_ = 1.0;
};

/// w_ij = int over (cell_j - x_i) cap supp(nu_{x_i}) of c |z|^{-(1+sigma)} dz,
/// with cell_j = (x_j - h/2, x_j + h/2) cap [a, b] and (-h/2, h/2) omitted.
/// Table kernels are copied (scaled by c_norm); their size must match the grid.
DiscreteOperator assemble_operator(const KernelSpec& spec, const Grid& grid);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Continuous reference for the nonlocal term:
///   int [u(x + z) - u(x)] nu_x(dz)
/// by adaptive Gauss-Kronrod quadrature with absolute tolerance `tol`.
/// The near-origin singularity is removed with the substitution
/// r = t^{1/(1-sigma)}, which turns |z|^{-sigma} (u(x+z)-u(x))/|z| into a
/// bounded integrand. `breakpoints` lists x-positions where u has kinks.
/// Throws ConvergenceError when the achieved error exceeds `tol`.
QuadratureResult oracle_apply(const KernelSpec& spec, const std::function<double(double)>& u,
                              double x, double tol, std::span<const double> breakpoints = {});

/// Largest one-sided positive slope max((u_i - u_{i-1})^+, (u_i - u_{i+1})^+) / h;
/// boundary nodes only see their interior neighbour.
double upwind_slope(std::span<const double> u, std::size_t i, double h) noexcept;

/// b_i * upwind_slope^m, the monotone realization of b(x)|Du|^m.
double numerical_hamiltonian(const Grid& grid, std::span<const double> u, std::size_t i,
                             double b_i, double m);

struct BarrierRatioReport {
  double beta = 0.0;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
  /// (node index, I_h(d^beta)_i * d_i^{sigma-beta}) for nodes with d <= (b-a)/4.
  std::vector<std::pair<std::size_t, double>> profile;
};

/// Discrete check that I(d^beta, x) <= C d^{beta-sigma}(x) near the boundary.
BarrierRatioReport distance_barrier_ratio(const KernelSpec& spec, const Grid& grid, double beta);

}  // namespace censolve
