#include "censolve/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "censolve/error.hpp"
#include "power_law.hpp"

namespace censolve {

Grid::Grid(Domain1D domain, int intervals) : domain_(domain), intervals_(intervals) {
  if (intervals < 8) throw ParameterError("grid needs at least 8 intervals");
  if (!(domain.a < domain.b)) throw ParameterError("domain requires a < b");
  h_ = domain_.length() / static_cast<double>(intervals_);
}

double Grid::node(std::size_t i) const noexcept {
  if (i + 1 == size()) return domain_.b;
  return domain_.a + static_cast<double>(i) * h_;
}

std::size_t Grid::nearest_node(double x) const {
  if (!domain_.contains(x)) throw ParameterError("point outside the grid domain");
  const double pos = std::round((x - domain_.a) / h_);
  return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(intervals_)));
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
  return x;
}

GridFunction Grid::sample(const std::function<double(double)>& f) const {
  GridFunction out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(node(i));
  return out;
}

DiscreteOperator::DiscreteOperator(const std::vector<std::vector<WeightEntry>>& rows, double sigma,
                                   double c_norm)
    : sigma_(sigma), c_norm_(c_norm) {
  const std::size_t n = rows.size();
  offsets_.reserve(n + 1);
  firsts_.reserve(n);
  row_sums_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = n;
    std::size_t hi = 0;
    for (const WeightEntry& e : rows[i]) {
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
        throw ParameterError("operator weights must be finite and nonnegative");
      }
      if (e.index == i || e.index >= n) {
        throw ParameterError("operator row references an invalid column");
      }
      lo = std::min(lo, e.index);
      hi = std::max(hi, e.index + 1);
    }
    if (lo >= hi) lo = hi = i;
    const std::size_t base = weights_.size();
    weights_.resize(base + (hi - lo), 0.0);
    double sum = 0.0;
    for (const WeightEntry& e : rows[i]) {
      weights_[base + (e.index - lo)] += e.weight;
      sum += e.weight;
    }
    firsts_.push_back(lo);
    offsets_.push_back(weights_.size());
    row_sums_.push_back(sum);
  }
}

std::vector<WeightEntry> DiscreteOperator::entries(std::size_t i) const {
  std::vector<WeightEntry> out;
  const RowView r = row(i);
  for (std::size_t k = 0; k < r.weights.size(); ++k) {
    if (r.weights[k] > 0.0) out.push_back({r.first + k, r.weights[k]});
  }
  return out;
}

double DiscreteOperator::weight(std::size_t i, std::size_t j) const noexcept {
  const RowView r = row(i);
  if (j < r.first || j >= r.last()) return 0.0;
  return r.weights[j - r.first];
}

double DiscreteOperator::weighted_sum(std::span<const double> u, std::size_t i) const noexcept {
  const RowView r = row(i);
  const double* w = r.weights.data();
  const double* v = u.data() + r.first;
  const std::size_t len = r.weights.size();
  // Four independent partial sums in a fixed order keep results reproducible.
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    acc0 += w[k] * v[k];
    acc1 += w[k + 1] * v[k + 1];
    acc2 += w[k + 2] * v[k + 2];
    acc3 += w[k + 3] * v[k + 3];
  }
  for (; k < len; ++k) acc0 += w[k] * v[k];
  return (acc0 + acc1) + (acc2 + acc3);
}

double DiscreteOperator::apply(std::span<const double> u, std::size_t i) const noexcept {
  const RowView r = row(i);
  const double* w = r.weights.data();
  const double* v = u.data() + r.first;
  const double ui = u[i];
  const std::size_t len = r.weights.size();
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    acc0 += w[k] * (v[k] - ui);
    acc1 += w[k + 1] * (v[k + 1] - ui);
    acc2 += w[k + 2] * (v[k + 2] - ui);
    acc3 += w[k + 3] * (v[k + 3] - ui);
  }
  for (; k < len; ++k) acc0 += w[k] * (v[k] - ui);
  return (acc0 + acc1) + (acc2 + acc3);
}

GridFunction DiscreteOperator::apply(std::span<const double> u) const {
  GridFunction out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = apply(u, i);
  return out;
}

std::vector<std::vector<double>> DiscreteOperator::dense_table() const {
  std::vector<std::vector<double>> dense(size(), std::vector<double>(size(), 0.0));
  for (std::size_t i = 0; i < size(); ++i) {
    const RowView r = row(i);
    for (std::size_t k = 0; k < r.weights.size(); ++k) dense[i][r.first + k] = r.weights[k] / c_norm_;
  }
  return dense;
}

DiscreteOperator assemble_operator(const KernelSpec& spec, const Grid& grid) {
  if (!(spec.domain() == grid.domain())) {
    throw ParameterError("kernel and grid live on different domains");
  }
  const std::size_t n = grid.size();
  std::vector<std::vector<WeightEntry>> rows(n);

  if (spec.kind() == KernelKind::table) {
    const auto& table = spec.table_rows();
    if (table.size() != n) {
      std::ostringstream msg;
      msg << "weight table has " << table.size() << " rows but the grid has " << n << " nodes";
      throw ParameterError(msg.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && table[i][j] > 0.0) rows[i].push_back({j, spec.c_norm() * table[i][j]});
      }
    }
    return DiscreteOperator(rows, spec.sigma(), spec.c_norm());
  }

  // Work in units of h so that mirrored rows see bit-identical interval ends.
  const double sigma = spec.sigma();
  const double p = -1.0 - sigma;
  const double scale = spec.c_norm() * std::pow(grid.spacing(), -sigma);
  const double last = static_cast<double>(grid.intervals());
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i);
    double supp_lo = -xi;
    double supp_hi = last - xi;
    if (spec.kind() == KernelKind::regional_stable) {
      const double d = std::min(xi, last - xi);
      supp_lo = -d;
      supp_hi = d;
    }
    rows[i].reserve(n);
    // Cells j != i never meet the omitted window (-1/2, 1/2).
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double xj = static_cast<double>(j);
      double lo = std::max(xj - 0.5, 0.0) - xi;
      double hi = std::min(xj + 0.5, last) - xi;
      lo = std::max(lo, supp_lo);
      hi = std::min(hi, supp_hi);
      if (!(lo < hi)) continue;
      const double w = scale * detail::signed_power(p, lo, hi);
      if (w > 0.0) rows[i].push_back({j, w});
    }
  }
  return DiscreteOperator(rows, sigma, spec.c_norm());
}

QuadratureResult oracle_apply(const KernelSpec& spec, const std::function<double(double)>& u,
                              double x, double tol, std::span<const double> breakpoints) {
  if (!(tol > 0.0)) throw ParameterError("oracle tolerance must be positive");
  const Interval supp = support_interval(spec, x);
  const double ux = u(x);

  if (spec.kind() == KernelKind::table) {
    // Atomic measure: the integral is a finite sum.
    const std::size_t i = spec.table_node(x);
    const double h = spec.table_spacing();
    const auto& row = spec.table_rows()[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j == i || row[j] == 0.0) continue;
      acc += row[j] * (u(spec.domain().a + static_cast<double>(j) * h) - ux);
    }
    return {spec.c_norm() * acc, 0.0};
  }
  if (supp.empty()) return {0.0, 0.0};

  using boost::math::quadrature::gauss_kronrod;
  const double sigma = spec.sigma();
  const double q = 1.0 / (1.0 - sigma);

  struct Piece {
    double side;
    double t0;
    double t1;
  };
  std::vector<Piece> pieces;
  for (double side : {-1.0, 1.0}) {
    const double radius = side < 0.0 ? -supp.lo : supp.hi;
    if (!(radius > 0.0)) continue;
    std::vector<double> cuts{0.0, std::pow(radius, 1.0 / q)};
    for (double bp : breakpoints) {
      const double r = side * (bp - x);
      if (r > 0.0 && r < radius) cuts.push_back(std::pow(r, 1.0 / q));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) pieces.push_back({side, cuts[k], cuts[k + 1]});
  }

  QuadratureResult result;
  const double piece_tol = tol / static_cast<double>(std::max<std::size_t>(pieces.size(), 1));
  for (const Piece& piece : pieces) {
    // int_0^R g(r) r^{-1-sigma} dr = q int_0^{R^{1/q}} g(t^q) / t^q dt
    auto integrand = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double r = std::pow(t, q);
      return (u(x + piece.side * r) - ux) / r;
    };
    double l1 = 0.0;
    double err = 0.0;
    gauss_kronrod<double, 31>::integrate(integrand, piece.t0, piece.t1, 0, 1.0, &err, &l1);
    const double rel = piece_tol / (q * std::max(l1, piece_tol));
    const double value =
        gauss_kronrod<double, 31>::integrate(integrand, piece.t0, piece.t1, 25, rel, &err, &l1);
    result.value += q * value;
    result.error_estimate += q * err;
  }
  result.value *= spec.c_norm();
  result.error_estimate *= spec.c_norm();
  if (!(result.error_estimate <= tol)) {
    std::ostringstream msg;
    msg << "oracle quadrature reached error estimate " << result.error_estimate
        << " above tolerance " << tol;
    throw ConvergenceError(msg.str(), result.error_estimate, 0);
  }
  return result;
}

double upwind_slope(std::span<const double> u, std::size_t i, double h) noexcept {
  double rise = 0.0;
  if (i > 0) rise = std::max(rise, u[i] - u[i - 1]);
  if (i + 1 < u.size()) rise = std::max(rise, u[i] - u[i + 1]);
  return rise / h;
}

double numerical_hamiltonian(const Grid& grid, std::span<const double> u, std::size_t i,
                             double b_i, double m) {
  if (u.size() != grid.size() || i >= u.size()) {
    throw ParameterError("numerical_hamiltonian: index or size mismatch");
  }
  const double slope = upwind_slope(u, i, grid.spacing());
  return slope > 0.0 ? b_i * std::pow(slope, m) : 0.0;
}

BarrierRatioReport distance_barrier_ratio(const KernelSpec& spec, const Grid& grid, double beta) {
  const double sigma = spec.sigma();
  if (!(beta > 0.0 && beta < sigma)) {
    throw ParameterError("distance barrier needs 0 < beta < sigma");
  }
  const DiscreteOperator op = assemble_operator(spec, grid);
  GridFunction dist_pow(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) dist_pow[i] = std::pow(grid.distance(i), beta);

  BarrierRatioReport report;
  report.beta = beta;
  const double band = grid.domain().length() / 4.0;
  bool first = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.distance(i);
    if (!(d > 0.0) || d > band + 1e-12 * band) continue;
    const double ratio = op.apply(dist_pow, i) * std::pow(d, sigma - beta);
    report.profile.emplace_back(i, ratio);
    if (first || ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax = i;
      first = false;
    }
  }
  return report;
}

}  // namespace censolve
