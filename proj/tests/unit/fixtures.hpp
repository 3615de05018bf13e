#pragma once

#include <cmath>
#include <numbers>

#include "censolve/problem.hpp"

namespace censolve::testing {

inline const Domain1D kUnit{0.0, 1.0};

inline ProblemSpec censored_problem(int n, double sigma = 0.5) {
  const Grid grid(kUnit, n);
  ProblemSpec p(KernelSpec::censored_stable(sigma, kUnit), grid);
  p.phi = BoundaryData::constant(0.0, 0.0);
  return p;
}

inline GridFunction sin_field(const Grid& grid, double amp, double k, double offset = 0.0) {
  return grid.sample([&](double x) { return amp * std::sin(k * std::numbers::pi * x) + offset; });
}

inline double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

inline double sup_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace censolve::testing
