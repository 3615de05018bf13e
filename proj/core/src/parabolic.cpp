#include "censolve/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "censolve/error.hpp"

namespace censolve {

StepResult advance(const Scheme& scheme, std::span<const double> u, double t,
                   double requested_dt) {
  const ProblemSpec& problem = scheme.problem();
  const std::size_t n = scheme.grid().size();
  if (u.size() != n) throw ParameterError("advance: field does not match the grid");
  if (!(requested_dt > 0.0)) throw ParameterError("advance: requested dt must be positive");

  StepResult step;
  step.step_limit = scheme.monotone_step_limit(u, problem.lambda);
  step.dt_used = std::min(requested_dt, 0.9 * step.step_limit);
  if (!(step.dt_used >= 1e-12)) {
    std::ostringstream msg;
    msg << "time step collapsed to " << step.dt_used << " at t = " << t
        << " (suspected blow-up)";
    throw ConvergenceError(msg.str(), step.dt_used, 0);
  }

  const double dt = step.dt_used;
  step.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    step.u[i] = u[i] - dt * scheme.residual(u, i, problem.lambda, problem.f[i]);
  }
  if (problem.mode == BoundaryMode::dirichlet) {
    step.u.front() = std::min(problem.phi.left(t + dt), step.u.front());
    step.u.back() = std::min(problem.phi.right(t + dt), step.u.back());
  }
  for (double v : step.u) {
    if (!std::isfinite(v)) throw ConvergenceError("explicit step produced non-finite values", v, 0);
  }
  return step;
}

Trajectory solve_evolution(const ProblemSpec& problem, double T, const EvolutionOptions& options) {
  return solve_evolution(Scheme(problem), T, options);
}

Trajectory solve_evolution(const Scheme& scheme, double T, const EvolutionOptions& options) {
  const ProblemSpec& problem = scheme.problem();
  problem.validate_compatibility();
  if (!(T > 0.0)) throw ParameterError("evolution horizon T must be positive");
  if (!(options.store_every > 0.0)) throw ParameterError("store_every must be positive");
  if (!(options.max_dt > 0.0)) throw ParameterError("max_dt must be positive");

  Trajectory traj;
  GridFunction u = problem.u0;
  double t = 0.0;
  traj.times.push_back(0.0);
  traj.fields.push_back(u);

  long next_index = 1;
  for (;;) {
    const double target = std::min(T, static_cast<double>(next_index) * options.store_every);
    while (t < target) {
      const double remaining = target - t;
      StepResult step = advance(scheme, u, t, std::min(options.max_dt, remaining));
      u = std::move(step.u);
      traj.dt_used.push_back(step.dt_used);
      traj.step_limit.push_back(step.step_limit);
      // Land exactly on the snapshot time when the full remainder was taken.
      t = step.dt_used >= remaining ? target : t + step.dt_used;
    }
    traj.times.push_back(t);
    traj.fields.push_back(u);
    if (t >= T) break;
    ++next_index;
  }
  return traj;
}

Trajectory sup_convolution_time(const Trajectory& trajectory, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("sup-convolution needs gamma > 0");
  Trajectory out;
  out.times = trajectory.times;
  out.fields.reserve(trajectory.snapshots());
  for (std::size_t k = 0; k < trajectory.snapshots(); ++k) {
    const double t = trajectory.times[k];
    GridFunction best = trajectory.fields[k];
    for (std::size_t j = 0; j < trajectory.snapshots(); ++j) {
      const double gap = trajectory.times[j] - t;
      const double penalty = gap * gap / gamma;
      const GridFunction& field = trajectory.fields[j];
      for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], field[i] - penalty);
    }
    out.fields.push_back(std::move(best));
  }
  return out;
}

namespace {

void finish_kappa(KappaCurve& curve) {
  double running_min = 0.0;
  for (std::size_t k = 0; k < curve.kappa.size(); ++k) {
    if (k > 0) {
      curve.max_upward_violation =
          std::max(curve.max_upward_violation, curve.kappa[k] - running_min);
      running_min = std::min(running_min, curve.kappa[k]);
    } else {
      running_min = curve.kappa[0];
    }
  }
}

}  // namespace

KappaCurve kappa_curve(const Trajectory& u, std::span<const double> v, double drift) {
  KappaCurve curve;
  for (std::size_t k = 0; k < u.snapshots(); ++k) {
    const GridFunction& field = u.fields[k];
    if (field.size() != v.size()) throw ParameterError("kappa_curve: grid mismatch");
    const double shift = drift * u.times[k];
    double kappa = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < field.size(); ++i) kappa = std::max(kappa, field[i] + shift - v[i]);
    curve.times.push_back(u.times[k]);
    curve.kappa.push_back(kappa);
  }
  finish_kappa(curve);
  return curve;
}

KappaCurve kappa_curve(const Trajectory& u, const Trajectory& v) {
  if (u.snapshots() != v.snapshots()) throw ParameterError("kappa_curve: snapshot mismatch");
  KappaCurve curve;
  for (std::size_t k = 0; k < u.snapshots(); ++k) {
    if (std::abs(u.times[k] - v.times[k]) > 1e-12 * std::max(1.0, std::abs(u.times[k]))) {
      throw ParameterError("kappa_curve: snapshot times differ");
    }
    const GridFunction& a = u.fields[k];
    const GridFunction& b = v.fields[k];
    if (a.size() != b.size()) throw ParameterError("kappa_curve: grid mismatch");
    double kappa = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) kappa = std::max(kappa, a[i] - b[i]);
    curve.times.push_back(u.times[k]);
    curve.kappa.push_back(kappa);
  }
  finish_kappa(curve);
  return curve;
}

namespace {

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

LinfBoundReport check_linf_bounds(const ProblemSpec& problem, const Trajectory& trajectory) {
  const double f_norm = sup_abs(problem.f);
  const double u0_norm = sup_abs(problem.u0);
  LinfBoundReport report;
  report.growth_excess = -std::numeric_limits<double>::infinity();
  if (problem.lambda > 0.0) report.uniform_excess = -std::numeric_limits<double>::infinity();

  double phi_norm = 0.0;
  for (std::size_t k = 0; k < trajectory.snapshots(); ++k) {
    const double t = trajectory.times[k];
    if (problem.mode == BoundaryMode::dirichlet) {
      phi_norm = std::max({phi_norm, std::abs(problem.phi.left(t)), std::abs(problem.phi.right(t))});
    }
    const double size = sup_abs(trajectory.fields[k]);
    report.max_abs = std::max(report.max_abs, size);
    report.growth_excess =
        std::max(report.growth_excess, size - (f_norm * t + phi_norm + u0_norm));
    if (report.uniform_excess) {
      report.uniform_excess = std::max(*report.uniform_excess,
                                       size - (f_norm / problem.lambda + phi_norm + u0_norm));
    }
  }
  return report;
}

double time_lipschitz_constant(const Trajectory& trajectory) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < trajectory.snapshots(); ++k) {
    const double dt = trajectory.times[k + 1] - trajectory.times[k];
    if (!(dt > 0.0)) continue;
    const GridFunction& a = trajectory.fields[k];
    const GridFunction& b = trajectory.fields[k + 1];
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(b[i] - a[i]) / dt);
  }
  return worst;
}

}  // namespace censolve
