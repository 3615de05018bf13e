#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace censolve {

/// Bounded interval (a, b) together with its distance function.
struct Domain1D {
  double a = 0.0;
  double b = 1.0;

  Domain1D() = default;
  Domain1D(double left, double right);

  double length() const noexcept { return b - a; }
  bool contains(double x) const noexcept { return x >= a && x <= b; }
  /// d(x) = min(x - a, b - x); meaningful on [a, b].
  double distance(double x) const noexcept;

  friend bool operator==(const Domain1D&, const Domain1D&) = default;
};

/// Open interval (lo, hi); empty when lo >= hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const noexcept { return !(lo < hi); }
  double length() const noexcept { return empty() ? 0.0 : hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class KernelKind { censored_stable, regional_stable, table };

std::string_view to_string(KernelKind kind) noexcept;
std::optional<KernelKind> parse_kernel_kind(std::string_view name) noexcept;

/// A family of censored Levy measures {nu_x}.
///
/// The two stable kinds have density c_norm * |z|^{-(1+sigma)} restricted to
///   censored-stable:  [a, b] - x
///   regional-stable:  (-d(x), d(x))
/// The table kind carries explicit atoms: row i holds the masses placed at
/// z = x_j - x_i for the uniform node set x_i = a + i (b - a) / (rows - 1).
class KernelSpec {
 public:
  static KernelSpec censored_stable(double sigma, Domain1D domain, double c_norm = 1.0);
  static KernelSpec regional_stable(double sigma, Domain1D domain, double c_norm = 1.0);
  static KernelSpec table(double sigma, Domain1D domain, std::vector<std::vector<double>> rows,
                          double c_norm = 1.0);

  KernelKind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  double c_norm() const noexcept { return c_norm_; }
  const Domain1D& domain() const noexcept { return domain_; }

  /// Raw table rows (unscaled by c_norm); empty unless kind() == table.
  const std::vector<std::vector<double>>& table_rows() const noexcept { return rows_; }
  /// Node spacing of the table; only valid for kind() == table.
  double table_spacing() const;
  /// Index of the table node located at x; throws if x is not a node.
  std::size_t table_node(double x) const;

  /// Same family with c_norm replaced.
  KernelSpec with_c_norm(double c_norm) const;

 private:
  KernelSpec(KernelKind kind, double sigma, Domain1D domain, double c_norm,
             std::vector<std::vector<double>> rows);

  KernelKind kind_;
  double sigma_;
  Domain1D domain_;
  double c_norm_;
  std::vector<std::vector<double>> rows_;
};

/// Three-branch growth profile used to bound tail moments:
///   delta^{beta - sigma}   if beta < sigma
///   |ln delta| + 1         if beta == sigma
///   1                      if beta > sigma
double h_function(double beta, double sigma, double delta);

/// Support of nu_x expressed in jump coordinates z.
Interval support_interval(const KernelSpec& spec, double x);

enum class MomentRegion { small_ball, tail };

/// Small ball: int_{B_delta} |z|^beta nu_x(dz).
/// Tail:       int_{B_delta^c} min(1, |z|^beta) nu_x(dz).
/// Stable kinds are integrated with exact power-law antiderivatives.
double moment_integral(const KernelSpec& spec, double x, MomentRegion region, double delta,
                       double beta);

/// int_{B_delta^c} |z|^beta |nu_x - nu_y|(dz).
double total_variation_moment(const KernelSpec& spec, double x, double y, double delta,
                              double beta);

struct TailBoundEntry {
  double beta = 0.0;
  double delta = 0.0;
  double sup_moment = 0.0;  // sup over sampled x
  double ratio = 0.0;       // sup_moment / h_{beta,sigma}(delta)
};

struct SmallBallBoundEntry {
  double beta = 0.0;
  double delta = 0.0;
  double sup_moment = 0.0;
  double ratio = 0.0;  // sup_moment / delta^{beta - sigma}
};

struct VariationEntry {
  double x = 0.0;
  double y = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double distance = 0.0;  // |x - y|
  double moment = 0.0;
};

struct AssumptionReport {
  std::vector<TailBoundEntry> tail;
  std::vector<SmallBallBoundEntry> small_ball;  // only beta > sigma, delta < 1
  std::vector<VariationEntry> variation;
  double c1 = 0.0;  // max tail ratio
  double c2 = 0.0;  // max small-ball ratio
  /// Empirical modulus: for each sampled |x - y|, the largest
  /// variation moment divided by (1 + h_{beta,sigma}(delta)).
  std::vector<std::pair<double, double>> modulus;
  /// Human-readable notes about ratios that keep growing as delta shrinks.
  std::vector<std::string> warnings;
};

/// Samples the moment bounds over the given points and reports fitted constants.
AssumptionReport validate_assumptions(const KernelSpec& spec, const std::vector<double>& x_samples,
                                      const std::vector<double>& delta_samples,
                                      const std::vector<double>& beta_samples);

}  // namespace censolve
