#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace censolve::detail {

// int_{r1}^{r2} r^p dr for 0 <= r1 <= r2.
inline double radial_power(double p, double r1, double r2) {
  if (!(r1 < r2)) return 0.0;
  if (std::abs(p + 1.0) < 1e-14) {
    if (r1 == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(r2 / r1);
  }
  if (r1 == 0.0 && p < -1.0) return std::numeric_limits<double>::infinity();
  return (std::pow(r2, p + 1.0) - std::pow(r1, p + 1.0)) / (p + 1.0);
}

// int_{lo}^{hi} |z|^p dz.
inline double signed_power(double p, double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  double total = 0.0;
  if (lo < 0.0) total += radial_power(p, std::max(0.0, -hi), -lo);
  if (hi > 0.0) total += radial_power(p, std::max(0.0, lo), hi);
  return total;
}

}  // namespace censolve::detail
