#include "censolve/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "censolve/error.hpp"
#include "power_law.hpp"

namespace censolve {

namespace {

using detail::radial_power;
using detail::signed_power;

// int_{r1}^{r2} min(1, r^beta) r^{-1-sigma} dr, split at r = 1.
double radial_tail(double beta, double sigma, double r1, double r2) {
  if (!(r1 < r2)) return 0.0;
  double total = 0.0;
  if (r1 < 1.0) total += radial_power(beta - 1.0 - sigma, r1, std::min(r2, 1.0));
  if (r2 > 1.0) total += radial_power(-1.0 - sigma, std::max(r1, 1.0), r2);
  return total;
}

// Pieces of [lo, hi] with |z| >= delta, as radial ranges.
template <typename F>
void for_each_outer_radial(double lo, double hi, double delta, F&& f) {
  // negative side: z in [lo, min(hi, -delta)]
  const double neg_hi = std::min(hi, -delta);
  if (lo < neg_hi) f(-neg_hi, -lo);
  const double pos_lo = std::max(lo, delta);
  if (pos_lo < hi) f(pos_lo, hi);
}

void check_parameters(double sigma, double c_norm) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw ParameterError("kernel order sigma must lie in (0,1)");
  }
  if (!(c_norm > 0.0) || !std::isfinite(c_norm)) {
    throw ParameterError("kernel normalizing constant must be positive");
  }
}

void check_moment_args(double delta, double beta) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!(beta >= 0.0 && beta <= 2.0)) throw ParameterError("beta must lie in [0,2]");
}

// Pieces of A \ B for open intervals.
std::vector<Interval> difference(const Interval& a, const Interval& b) {
  std::vector<Interval> out;
  if (a.empty()) return out;
  if (b.empty()) {
    out.push_back(a);
    return out;
  }
  Interval left{a.lo, std::min(a.hi, b.lo)};
  Interval right{std::max(a.lo, b.hi), a.hi};
  if (!left.empty()) out.push_back(left);
  if (!right.empty()) out.push_back(right);
  return out;
}

}  // namespace

Domain1D::Domain1D(double left, double right) : a(left), b(right) {
  if (!(left < right) || !std::isfinite(left) || !std::isfinite(right)) {
    throw ParameterError("domain requires a < b");
  }
}

double Domain1D::distance(double x) const noexcept { return std::max(0.0, std::min(x - a, b - x)); }

std::string_view to_string(KernelKind kind) noexcept {
  switch (kind) {
    case KernelKind::censored_stable:
      return "censored-stable";
    case KernelKind::regional_stable:
      return "regional-stable";
    case KernelKind::table:
      return "table";
  }
  return "unknown";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view name) noexcept {
  if (name == "censored-stable") return KernelKind::censored_stable;
  if (name == "regional-stable") return KernelKind::regional_stable;
  if (name == "table") return KernelKind::table;
  return std::nullopt;
}

KernelSpec::KernelSpec(KernelKind kind, double sigma, Domain1D domain, double c_norm,
                       std::vector<std::vector<double>> rows)
    : kind_(kind), sigma_(sigma), domain_(domain), c_norm_(c_norm), rows_(std::move(rows)) {
  check_parameters(sigma_, c_norm_);
  if (!(domain_.a < domain_.b)) throw ParameterError("domain requires a < b");
  if (kind_ == KernelKind::table) {
    const std::size_t n = rows_.size();
    if (n < 2) throw ParameterError("weight table needs at least two rows");
    for (std::size_t i = 0; i < n; ++i) {
      if (rows_[i].size() != n) {
        std::ostringstream msg;
        msg << "weight table row " << i << " has " << rows_[i].size() << " entries, expected "
            << n;
        throw ParameterError(msg.str());
      }
      for (double w : rows_[i]) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
          throw ParameterError("weight table entries must be finite and nonnegative");
        }
      }
    }
  }
}

KernelSpec KernelSpec::censored_stable(double sigma, Domain1D domain, double c_norm) {
  return KernelSpec(KernelKind::censored_stable, sigma, domain, c_norm, {});
}

KernelSpec KernelSpec::regional_stable(double sigma, Domain1D domain, double c_norm) {
  return KernelSpec(KernelKind::regional_stable, sigma, domain, c_norm, {});
}

KernelSpec KernelSpec::table(double sigma, Domain1D domain, std::vector<std::vector<double>> rows,
                             double c_norm) {
  return KernelSpec(KernelKind::table, sigma, domain, c_norm, std::move(rows));
}

double KernelSpec::table_spacing() const {
  if (kind_ != KernelKind::table) throw ParameterError("kernel has no weight table");
  return domain_.length() / static_cast<double>(rows_.size() - 1);
}

std::size_t KernelSpec::table_node(double x) const {
  const double h = table_spacing();
  const double pos = (x - domain_.a) / h;
  const double idx = std::round(pos);
  if (std::abs(pos - idx) > 1e-9 || idx < 0.0 || idx > static_cast<double>(rows_.size() - 1)) {
    throw ParameterError("table kernels are only defined at their nodes");
  }
  return static_cast<std::size_t>(idx);
}

KernelSpec KernelSpec::with_c_norm(double c_norm) const {
  return KernelSpec(kind_, sigma_, domain_, c_norm, rows_);
}

double h_function(double beta, double sigma, double delta) {
  if (!(delta > 0.0)) throw ParameterError("h_function requires delta > 0");
  if (!(beta >= 0.0 && beta <= 2.0)) throw ParameterError("h_function requires beta in [0,2]");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ParameterError("h_function requires sigma in (0,1)");
  if (beta < sigma) return std::pow(delta, beta - sigma);
  if (beta == sigma) return std::abs(std::log(delta)) + 1.0;
  return 1.0;
}

Interval support_interval(const KernelSpec& spec, double x) {
  const Domain1D& dom = spec.domain();
  if (!dom.contains(x)) throw ParameterError("support_interval: x outside the domain");
  switch (spec.kind()) {
    case KernelKind::censored_stable:
      return {dom.a - x, dom.b - x};
    case KernelKind::regional_stable: {
      const double d = dom.distance(x);
      return {-d, d};
    }
    case KernelKind::table: {
      const std::size_t i = spec.table_node(x);
      const double h = spec.table_spacing();
      const auto& row = spec.table_rows()[i];
      Interval hull{0.0, 0.0};
      bool any = false;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j == i || row[j] <= 0.0) continue;
        const double z = (static_cast<double>(j) - static_cast<double>(i)) * h;
        if (!any) {
          hull = {z, z};
          any = true;
        } else {
          hull.lo = std::min(hull.lo, z);
          hull.hi = std::max(hull.hi, z);
        }
      }
      return hull;
    }
  }
  return {};
}

double moment_integral(const KernelSpec& spec, double x, MomentRegion region, double delta,
                       double beta) {
  check_moment_args(delta, beta);
  const double sigma = spec.sigma();

  if (spec.kind() == KernelKind::table) {
    const std::size_t i = spec.table_node(x);
    const double h = spec.table_spacing();
    const auto& row = spec.table_rows()[i];
    double total = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j == i || row[j] == 0.0) continue;
      const double r = std::abs((static_cast<double>(j) - static_cast<double>(i)) * h);
      const double pw = beta == 0.0 ? 1.0 : std::pow(r, beta);
      if (region == MomentRegion::small_ball) {
        if (r < delta) total += row[j] * pw;
      } else if (r >= delta) {
        total += row[j] * std::min(1.0, pw);
      }
    }
    return spec.c_norm() * total;
  }

  const Interval supp = support_interval(spec, x);
  if (supp.empty()) return 0.0;

  if (region == MomentRegion::small_ball) {
    const Interval ball{std::max(supp.lo, -delta), std::min(supp.hi, delta)};
    if (ball.empty()) return 0.0;
    if (ball.lo <= 0.0 && ball.hi >= 0.0 && beta <= sigma) {
      throw ParameterError("small-ball moment diverges for beta <= sigma");
    }
    return spec.c_norm() * signed_power(beta - 1.0 - sigma, ball.lo, ball.hi);
  }

  double total = 0.0;
  for_each_outer_radial(supp.lo, supp.hi, delta,
                        [&](double r1, double r2) { total += radial_tail(beta, sigma, r1, r2); });
  return spec.c_norm() * total;
}

double total_variation_moment(const KernelSpec& spec, double x, double y, double delta,
                              double beta) {
  check_moment_args(delta, beta);

  if (spec.kind() == KernelKind::table) {
    const std::size_t i = spec.table_node(x);
    const std::size_t k = spec.table_node(y);
    const auto& rows = spec.table_rows();
    const long n = static_cast<long>(rows.size()) - 1;
    const double h = spec.table_spacing();
    auto mass = [&](std::size_t row, long offset) {
      const long col = static_cast<long>(row) + offset;
      return (col < 0 || col > n) ? 0.0 : rows[row][static_cast<std::size_t>(col)];
    };
    double total = 0.0;
    for (long off = -n; off <= n; ++off) {
      if (off == 0) continue;
      const double r = std::abs(static_cast<double>(off) * h);
      if (r < delta) continue;
      const double diff = std::abs(mass(i, off) - mass(k, off));
      if (diff > 0.0) total += diff * (beta == 0.0 ? 1.0 : std::pow(r, beta));
    }
    return spec.c_norm() * total;
  }

  // Both measures share the density, so |nu_x - nu_y| lives on the symmetric
  // difference of the supports.
  const Interval sx = support_interval(spec, x);
  const Interval sy = support_interval(spec, y);
  std::vector<Interval> pieces = difference(sx, sy);
  for (const Interval& piece : difference(sy, sx)) pieces.push_back(piece);

  const double p = beta - 1.0 - spec.sigma();
  double total = 0.0;
  for (const Interval& piece : pieces) {
    for_each_outer_radial(piece.lo, piece.hi, delta,
                          [&](double r1, double r2) { total += radial_power(p, r1, r2); });
  }
  return spec.c_norm() * total;
}

namespace {

template <typename Entry>
void flag_growth(const std::vector<Entry>& entries, std::string_view label,
                 std::vector<std::string>& warnings) {
  std::map<double, std::vector<Entry>> by_beta;
  for (const Entry& e : entries) by_beta[e.beta].push_back(e);
  for (auto& [beta, list] : by_beta) {
    std::sort(list.begin(), list.end(),
              [](const Entry& l, const Entry& r) { return l.delta > r.delta; });
    if (list.size() < 3) continue;
    const std::size_t n = list.size();
    const bool increasing = list[n - 1].ratio > list[n - 2].ratio &&
                            list[n - 2].ratio > list[n - 3].ratio;
    if (increasing && list[n - 1].ratio > 1.5 * list[n - 3].ratio) {
      std::ostringstream msg;
      msg << label << " ratio keeps growing as delta shrinks (beta=" << beta << ")";
      warnings.push_back(msg.str());
    }
  }
}

}  // namespace

AssumptionReport validate_assumptions(const KernelSpec& spec, const std::vector<double>& x_samples,
                                      const std::vector<double>& delta_samples,
                                      const std::vector<double>& beta_samples) {
  if (x_samples.empty() || delta_samples.empty() || beta_samples.empty()) {
    throw ParameterError("validate_assumptions needs nonempty sample sets");
  }
  const double sigma = spec.sigma();
  AssumptionReport report;

  for (double beta : beta_samples) {
    for (double delta : delta_samples) {
      TailBoundEntry tail{beta, delta, 0.0, 0.0};
      for (double x : x_samples) {
        tail.sup_moment =
            std::max(tail.sup_moment, moment_integral(spec, x, MomentRegion::tail, delta, beta));
      }
      tail.ratio = tail.sup_moment / h_function(beta, sigma, delta);
      report.c1 = std::max(report.c1, tail.ratio);
      report.tail.push_back(tail);

      if (beta > sigma && delta < 1.0) {
        SmallBallBoundEntry ball{beta, delta, 0.0, 0.0};
        for (double x : x_samples) {
          ball.sup_moment = std::max(
              ball.sup_moment, moment_integral(spec, x, MomentRegion::small_ball, delta, beta));
        }
        ball.ratio = ball.sup_moment / std::pow(delta, beta - sigma);
        report.c2 = std::max(report.c2, ball.ratio);
        report.small_ball.push_back(ball);
      }
    }
  }

  std::map<double, double> modulus;
  for (std::size_t p = 0; p < x_samples.size(); ++p) {
    for (std::size_t q = p; q < x_samples.size(); ++q) {
      const double x = x_samples[p];
      const double y = x_samples[q];
      const double dist = std::abs(x - y);
      for (double beta : beta_samples) {
        if (!(beta > 0.0)) continue;
        for (double delta : delta_samples) {
          const double tv = total_variation_moment(spec, x, y, delta, beta);
          report.variation.push_back({x, y, beta, delta, dist, tv});
          const double scaled = tv / (1.0 + h_function(beta, sigma, delta));
          auto [it, inserted] = modulus.emplace(dist, scaled);
          if (!inserted) it->second = std::max(it->second, scaled);
        }
      }
    }
  }
  report.modulus.assign(modulus.begin(), modulus.end());

  flag_growth(report.tail, "tail", report.warnings);
  flag_growth(report.small_ball, "small-ball", report.warnings);
  return report;
}

}  // namespace censolve
