#include "commands.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "censolve/ergodic.hpp"
#include "censolve/error.hpp"
#include "censolve/io.hpp"
#include "censolve/ltb.hpp"
#include "censolve/parabolic.hpp"
#include "censolve/regularity.hpp"
#include "censolve/stationary.hpp"

#ifndef CENSOLVE_VERSION_STRING
#define CENSOLVE_VERSION_STRING "unknown"
#endif

namespace censolve::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double positive(const RunConfig& cfg, const std::string& key, double fallback) {
  const double v = cfg.real_or(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a positive number");
  return v;
}

long positive_integer(const RunConfig& cfg, const std::string& key, long fallback) {
  const long v = cfg.integer_or(key, fallback);
  if (v <= 0) throw ConfigError(key, "must be a positive integer");
  return v;
}

double total_wall_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_manifest(const fs::path& dir, const Invocation& inv, const RunConfig& cfg,
                    double seconds) {
  std::ofstream out(dir / "manifest.txt", std::ios::trunc);
  out << "censolve " << CENSOLVE_VERSION_STRING << '\n';
  out << "subcommand: " << inv.subcommand << '\n';
#if defined(__clang__)
  out << "compiler: clang " << __clang_version__ << '\n';
#elif defined(__GNUC__)
  out << "compiler: gcc " << __VERSION__ << '\n';
#endif
  out << "boost: " << BOOST_LIB_VERSION << '\n';
  out << "fmt: " << FMT_VERSION << '\n';
  out << "nlohmann_json: " << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR
      << '.' << NLOHMANN_JSON_VERSION_PATCH << '\n';
  out << fmt::format("wall_time_s: {:.3f}\n", seconds);
  out << "\n# config echo\n";
  for (const auto& [k, v] : cfg.entries()) out << k << " = " << v << '\n';
}

// ---- validate-kernel ------------------------------------------------------

void cmd_validate_kernel(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const KernelSpec kernel = build_kernel(cfg);
  const Grid grid = build_grid(cfg, kernel.domain(), cfg.integer("grid.N"));
  const double sigma = kernel.sigma();
  const DiscreteOperator op = assemble_operator(kernel, grid);
  io::write_operator(dir / "operator.csv", op, grid);

  const long seed = cfg.integer_or("run.seed", 42);
  const double beta = cfg.real_or("run.beta", 0.5 * sigma);
  if (!(beta > 0.0 && beta < sigma)) throw ConfigError("run.beta", "must lie in (0, sigma)");

  std::vector<double> xs;
  for (int k = 0; k < 20; ++k) {
    xs.push_back(kernel.domain().a + (k + 0.5) / 20.0 * kernel.domain().length());
  }
  if (kernel.kind() == KernelKind::table) {
    // Atoms live on table nodes only.
    xs.clear();
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 20);
    for (std::size_t i = 0; i < grid.size(); i += stride) xs.push_back(grid.node(i));
  }
  std::vector<double> deltas;
  for (int k = 1; k <= 8; ++k) deltas.push_back(std::ldexp(1.0, -k));
  const std::vector<double> betas{0.0, 0.5 * sigma, sigma, 0.5 * (1.0 + sigma), 1.0};
  const AssumptionReport assumptions = validate_assumptions(kernel, xs, deltas, betas);

  json doc;
  doc["kind"] = std::string(to_string(kernel.kind()));
  doc["sigma"] = sigma;
  doc["c_norm"] = kernel.c_norm();
  doc["domain_a"] = kernel.domain().a;
  doc["domain_b"] = kernel.domain().b;
  doc["N"] = grid.size() - 1;
  doc["seed"] = seed;
  doc["fitted_c1"] = real_or_null(assumptions.c1);
  doc["fitted_c2"] = real_or_null(assumptions.c2);
  doc["warnings"] = assumptions.warnings;
  json modulus = json::array();
  for (const auto& [d, w] : assumptions.modulus) modulus.push_back({{"distance", d}, {"modulus", w}});
  doc["modulus"] = modulus;

  if (kernel.kind() != KernelKind::table) {
    const BarrierRatioReport barrier = distance_barrier_ratio(kernel, grid, beta);
    doc["barrier_beta"] = beta;
    doc["barrier_max_ratio"] = barrier.max_ratio;
    doc["barrier_argmax"] = barrier.argmax;

    // Consistency against the quadrature oracle at seeded interior nodes.
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_int_distribution<std::size_t> pick(1, grid.size() - 2);
    const Domain1D dom = kernel.domain();
    auto u = [&](double x) { return std::sin(std::numbers::pi * (x - dom.a) / dom.length()); };
    const GridFunction uh = grid.sample(u);
    json probes = json::array();
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const std::size_t i = pick(rng);
      const double discrete = op.apply(uh, i);
      const QuadratureResult ref = oracle_apply(kernel, u, grid.node(i), 1e-8);
      worst = std::max(worst, std::abs(discrete - ref.value));
      probes.push_back({{"i", i}, {"x", grid.node(i)}, {"discrete", discrete},
                        {"oracle", ref.value}, {"error", std::abs(discrete - ref.value)}});
    }
    doc["consistency_max_error"] = worst;
    doc["consistency_probes"] = probes;
  }

  int n_star_max = 0;
  bool covered = true;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const CoveringReport cover = covering_sets(op, s, 4 * static_cast<int>(grid.size()));
    if (cover.failed()) {
      covered = false;
      continue;
    }
    n_star_max = std::max(n_star_max, *cover.n_star);
  }
  doc["covering_all_starts"] = covered;
  doc["covering_n_star_max"] = n_star_max;

  write_json(dir / "kernel.json", doc);
  log << fmt::format("kernel {} sigma={} N={}: C1={:.6g} C2={:.6g}, {} warning(s)\n",
                     to_string(kernel.kind()), sigma, grid.size() - 1, assumptions.c1,
                     assumptions.c2, assumptions.warnings.size());
}

// ---- solve-stationary -----------------------------------------------------

json solution_summary(const ProblemSpec& problem, const SolutionField& sol) {
  json doc;
  doc["N"] = problem.grid.size() - 1;
  doc["lambda"] = problem.lambda;
  doc["m"] = problem.m;
  doc["mode"] = std::string(to_string(problem.mode));
  doc["iterations"] = sol.iterations;
  doc["residual_norm"] = sol.residual_norm;
  doc["boundary_loss_left"] = sol.boundary_loss[0];
  doc["boundary_loss_right"] = sol.boundary_loss[1];
  doc["u_min"] = *std::min_element(sol.u.begin(), sol.u.end());
  doc["u_max"] = *std::max_element(sol.u.begin(), sol.u.end());
  return doc;
}

void cmd_solve_stationary(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  ProblemSpec problem = build_problem(cfg, cfg.integer("grid.N"));
  StationaryOptions opts;
  opts.tol = positive(cfg, "run.tol", 1e-10);
  opts.max_iter = positive_integer(cfg, "run.max_iter", 200000);

  std::optional<double> c;
  if (problem.lambda == 0.0) {
    if (problem.mode == BoundaryMode::state_constraint) {
      throw ConfigError("problem.lambda",
                        "state-constraint stationary solves need lambda > 0 (use solve-ergodic)");
    }
    ErgodicOptions eo;
    eo.tol = opts.tol;
    c = solve_ergodic_pair(problem, eo).c;
    if (!(*c < 0.0)) {
      throw ConvergenceError(
          fmt::format("no bounded stationary solution: ergodic constant c = {} is not negative",
                      *c),
          *c, 0);
    }
    problem.ergodic_constant = c;
  }
  const SolutionField sol = solve_stationary(problem, opts);

  GridFunction flag(problem.grid.size(), 0.0);
  flag.front() = sol.boundary_loss[0] ? 1.0 : 0.0;
  flag.back() = sol.boundary_loss[1] ? 1.0 : 0.0;
  io::write_columns(dir / "solution.csv", {"x", "u", "residual", "boundary_flag"},
                    {problem.grid.nodes(), sol.u, sol.residual, flag});
  json doc = solution_summary(problem, sol);
  if (c) doc["ergodic_constant"] = *c;
  write_json(dir / "summary.json", doc);
  log << fmt::format("stationary: {} iterations, residual {:.3e}\n", sol.iterations,
                     sol.residual_norm);
}

// ---- solve-parabolic ------------------------------------------------------

void cmd_solve_parabolic(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = build_problem(cfg, cfg.integer("grid.N"));
  try {
    problem.validate_compatibility();
  } catch (const ParameterError& e) {
    throw ConfigError("problem.u0", e.what());
  }
  const double T = positive(cfg, "run.T", 1.0);
  if (!cfg.has("run.T")) throw ConfigError("run.T", "missing required key");
  EvolutionOptions evo;
  evo.store_every = positive(cfg, "run.store_every", 0.1);
  evo.max_dt = cfg.has("run.max_dt") ? positive(cfg, "run.max_dt", 1.0)
                                     : std::numeric_limits<double>::infinity();

  const Trajectory traj = solve_evolution(problem, T, evo);
  io::write_trajectory(dir / "trajectory.csv", problem.grid, traj);

  const LinfBoundReport bounds = check_linf_bounds(problem, traj);
  const auto [dt_min, dt_max] = std::minmax_element(traj.dt_used.begin(), traj.dt_used.end());
  json doc;
  doc["N"] = problem.grid.size() - 1;
  doc["T"] = T;
  doc["snapshots"] = traj.snapshots();
  doc["steps"] = traj.dt_used.size();
  doc["dt_min"] = *dt_min;
  doc["dt_max"] = *dt_max;
  doc["dt_mean"] = T / static_cast<double>(traj.dt_used.size());
  doc["max_abs_u"] = bounds.max_abs;
  doc["growth_bound_excess"] = bounds.growth_excess;
  doc["growth_bound_ok"] = bounds.growth_excess <= 1e-6;
  if (bounds.uniform_excess) {
    doc["uniform_bound_excess"] = *bounds.uniform_excess;
    doc["uniform_bound_ok"] = *bounds.uniform_excess <= 1e-6;
  }
  doc["time_lipschitz"] = time_lipschitz_constant(traj);
  if (problem.lambda > 0.0) {
    StationaryOptions so;
    so.tol = positive(cfg, "run.tol", 1e-10);
    const SolutionField steady = solve_stationary(problem, so);
    const KappaCurve kappa = kappa_curve(traj, steady.u, 0.0);
    doc["kappa_initial"] = kappa.kappa.front();
    doc["kappa_final"] = kappa.kappa.back();
    doc["kappa_max_upward_violation"] = kappa.max_upward_violation;
  }
  write_json(dir / "summary.json", doc);
  log << fmt::format("evolution to T={}: {} steps, {} snapshots\n", T, traj.dt_used.size(),
                     traj.snapshots());
}

// ---- solve-ergodic --------------------------------------------------------

void cmd_solve_ergodic(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  ProblemSpec problem = build_problem(cfg, cfg.integer("grid.N"), false);
  problem.lambda = 0.0;
  problem.mode = BoundaryMode::state_constraint;

  ErgodicOptions eo;
  eo.tol = positive(cfg, "run.tol", 1e-10);
  eo.max_iter = positive_integer(cfg, "run.max_iter", 200000);
  if (cfg.has("run.x_star")) {
    const long xs = cfg.integer("run.x_star");
    if (xs < 0 || xs >= static_cast<long>(problem.grid.size())) {
      throw ConfigError("run.x_star", "node index outside the grid");
    }
    eo.x_star = static_cast<std::size_t>(xs);
  }
  const double alpha0 = positive(cfg, "run.alpha0", 0.4);
  const long levels = positive_integer(cfg, "run.alpha_levels", 6);
  if (levels < 3) throw ConfigError("run.alpha_levels", "at least three levels are needed");
  const double T = positive(cfg, "run.T", 50.0);
  const double window = positive(cfg, "run.window", 0.1 * T);
  if (!(window < T)) throw ConfigError("run.window", "must be smaller than run.T");

  ErgodicResult result =
      ergodic_constant_discount(problem, halving_schedule(alpha0, static_cast<int>(levels)), eo);
  result.c_slope = ergodic_constant_slope(problem, T, window);
  const ErgodicPair pair = solve_ergodic_pair(problem, eo);

  json doc;
  doc["N"] = problem.grid.size() - 1;
  doc["c_discount"] = result.c_discount;
  doc["c_slope"] = *result.c_slope;
  doc["c_relative_value"] = pair.c;
  doc["relative_value_residual"] = pair.residual_norm;
  doc["x_star_index"] = result.x_star_index;
  doc["x_star"] = problem.grid.node(result.x_star_index);
  doc["fit_slope"] = result.fit_slope;
  doc["fit_residual"] = result.fit_residual;
  doc["c_spread"] = result.c_spread;
  doc["spread_flagged"] = result.spread_flagged;
  doc["alpha_u_ratio"] = result.alpha_u_ratio;
  doc["alpha_u_bounded"] = result.alpha_u_bounded;
  json table = json::array();
  for (const DiscountLevel& l : result.levels) {
    table.push_back({{"alpha", l.alpha},
                     {"c_alpha", l.c_alpha},
                     {"alpha_u_norm", l.alpha_u_norm},
                     {"iterations", l.iterations},
                     {"residual_norm", l.residual_norm}});
  }
  doc["levels"] = table;

  const CoveringReport cover =
      covering_sets(problem.kernel, problem.grid, result.x_star_index,
                    4 * static_cast<int>(problem.grid.size()));
  doc["covering_start"] = cover.start;
  doc["covering_n_star"] = cover.n_star ? json(*cover.n_star) : json(nullptr);
  std::vector<std::size_t> sizes;
  for (const auto& s : cover.sets) sizes.push_back(s.size());
  doc["covering_sizes"] = sizes;

  if (cfg.has("run.beta")) {
    const double beta = cfg.real("run.beta");
    if (!barrier_beta_admissible(beta, problem.kernel.sigma(), problem.m)) {
      throw ConfigError("run.beta", "outside the admissible barrier range");
    }
    const double alpha = positive(cfg, "run.barrier_alpha", 0.5);
    const double c1 = cfg.real_or("run.barrier_c1", 0.0);
    if (!(c1 >= 0.0)) throw ConfigError("run.barrier_c1", "must be nonnegative");
    const BarrierReport barrier = barrier_residual(problem, alpha, beta, c1);
    doc["barrier_beta"] = beta;
    doc["barrier_alpha"] = alpha;
    doc["barrier_c1"] = c1;
    doc["barrier_min_residual"] = barrier.min_residual;
    doc["barrier_certified_c1"] = barrier.certified_c1;
  }
  write_json(dir / "ergodic.json", doc);
  io::write_columns(dir / "u_infinity.csv", {"x", "u_infinity"},
                    {problem.grid.nodes(), result.u_infinity});
  log << fmt::format("ergodic constant: discount {:.10f}, slope {:.10f}\n", result.c_discount,
                     *result.c_slope);
}

// ---- estimate-regularity --------------------------------------------------

json regularity_json(const RegularityReport& r) {
  json doc;
  doc["lipschitz_seminorm"] = r.lipschitz_seminorm;
  json holder = json::array();
  for (const auto& [g, v] : r.holder) holder.push_back({{"gamma", g}, {"seminorm", v}});
  doc["holder"] = holder;
  doc["fitted_exponent"] = r.fitted_exponent ? json(*r.fitted_exponent) : json(nullptr);
  doc["gradient_weight_max"] = r.gradient_weight_max;
  doc["oscillation"] = r.oscillation;
  return doc;
}

void cmd_estimate_regularity(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const long base_n = cfg.integer("grid.N");
  std::vector<int> levels;
  for (double v : cfg.reals_or("run.levels", {static_cast<double>(base_n)})) {
    if (v < 8 || v != std::floor(v)) throw ConfigError("run.levels", "levels must be integers >= 8");
    levels.push_back(static_cast<int>(v));
  }
  RegularityOptions ro;
  for (double g : cfg.reals_or("run.gammas", {})) {
    if (!(g > 0.0 && g <= 1.0)) throw ConfigError("run.gammas", "exponents must lie in (0, 1]");
    ro.gammas.push_back(g);
  }
  const double tol = positive(cfg, "run.tol", 1e-10);
  // Build every level up front so schema errors surface before solving.
  std::map<int, ProblemSpec> problems;
  for (int n : levels) problems.emplace(n, build_problem(cfg, n));
  const RefinementStudy study = refinement_study(
      [&](int n) { return problems.at(n); }, levels, ro, tol);

  const RefinementRow& last = study.rows.back();
  json doc = regularity_json(last.report);
  doc["N"] = last.intervals;
  doc["lipschitz_ratio"] = study.lipschitz_ratio;
  doc["gradient_weight_ratio"] = study.gradient_weight_ratio;
  json table = json::array();
  for (const RefinementRow& row : study.rows) {
    json entry = regularity_json(row.report);
    entry["N"] = row.intervals;
    table.push_back(entry);
  }
  doc["refinement"] = table;
  write_json(dir / "regularity.json", doc);

  const Grid& grid = problems.at(last.intervals).grid;
  std::vector<double> x, d;
  for (std::size_t i : last.profile.nodes) {
    x.push_back(grid.node(i));
    d.push_back(grid.distance(i));
  }
  io::write_columns(dir / "gradient_profile.csv", {"x", "distance", "weighted_gradient"},
                    {x, d, last.profile.values});
  log << fmt::format("regularity at N={}: Lipschitz {:.6g}, weighted gradient {:.6g}\n",
                     last.intervals, last.report.lipschitz_seminorm,
                     last.report.gradient_weight_max);
}

// ---- run-ltb --------------------------------------------------------------

void write_plot_script(const fs::path& path, LtbMode mode) {
  std::ofstream out(path, std::ios::trunc);
  out << "# gnuplot -p " << path.filename().string() << "\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 't'\n"
      << "set logscale y\n"
      << "set title 'large-time distance (" << to_string(mode) << ")'\n"
      << "plot 'distance.csv' using 1:2 with lines\n"
      << "pause mouse close\n"
      << "unset logscale y\n"
      << "set title 'kappa'\n"
      << "plot 'distance.csv' using 1:3 with lines\n";
}

void cmd_run_ltb(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const ProblemSpec problem = build_problem(cfg, cfg.integer("grid.N"));
  try {
    problem.validate_compatibility();
  } catch (const ParameterError& e) {
    throw ConfigError("problem.u0", e.what());
  }
  LtbMode mode;
  try {
    mode = parse_ltb_mode(cfg.text("run.ltb_mode"));
  } catch (const ParameterError& e) {
    throw ConfigError("run.ltb_mode", e.what());
  }
  if (!cfg.has("run.T")) throw ConfigError("run.T", "missing required key");
  const double T = positive(cfg, "run.T", 1.0);
  LtbOptions lo;
  lo.store_every = positive(cfg, "run.store_every", 0.1);
  lo.tol = positive(cfg, "run.tol", 1e-11);
  lo.max_iter = positive_integer(cfg, "run.max_iter", 200000);
  lo.c_margin = positive(cfg, "run.c_margin", 0.1);
  if (cfg.has("run.max_dt")) lo.max_dt = positive(cfg, "run.max_dt", 1.0);

  LtbReport report;
  try {
    report = run_ltb(problem, mode, T, lo);
  } catch (const ParameterError& e) {
    throw ConfigError("run.ltb_mode", e.what());
  }

  std::vector<std::string> header{"t", "distance", "kappa"};
  std::vector<std::vector<double>> cols{report.times, report.distance, report.kappa.kappa};
  if (!report.offsets.empty()) {
    header.push_back("K");
    cols.push_back(report.offsets);
  }
  io::write_columns(dir / "distance.csv", header, cols);

  json doc;
  doc["mode"] = std::string(to_string(mode));
  doc["T"] = T;
  doc["N"] = problem.grid.size() - 1;
  doc["c"] = report.c ? json(*report.c) : json(nullptr);
  doc["K"] = report.K ? json(*report.K) : json(nullptr);
  doc["final_error"] = report.final_error;
  doc["kappa_max_upward_violation"] = report.kappa.max_upward_violation;
  doc["kappa_monotone"] = report.kappa_monotone;
  doc["late_increase"] = report.late_increase;
  doc["distance_nonmonotone"] = report.distance_nonmonotone;
  if (report.shifted_sup) doc["shifted_sup"] = *report.shifted_sup;
  if (report.stationary_diverged) {
    doc["stationary_diverged"] = *report.stationary_diverged;
    doc["stationary_message"] = report.stationary_message;
  }
  if (report.boundary_excess) {
    doc["boundary_excess_left"] = (*report.boundary_excess)[0];
    doc["boundary_excess_right"] = (*report.boundary_excess)[1];
    doc["boundary_ok"] = report.boundary_ok;
  }
  write_json(dir / "ltb.json", doc);
  write_plot_script(dir / "plot_ltb.gp", mode);
  log << fmt::format("ltb {}: final distance {:.3e}, kappa violation {:.3e}\n", to_string(mode),
                     report.final_error, report.kappa.max_upward_violation);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"validate-kernel",     "solve-stationary",
                                              "solve-parabolic",     "solve-ergodic",
                                              "estimate-regularity", "run-ltb"};
  return names;
}

KernelSpec build_kernel(const RunConfig& cfg) {
  const std::string& kind_text = cfg.text("kernel.kind");
  const std::optional<KernelKind> kind = parse_kernel_kind(kind_text);
  if (!kind) throw ConfigError("kernel.kind", "unknown kernel kind '" + kind_text + "'");
  const double sigma = cfg.real("kernel.sigma");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("kernel.sigma", "must lie in (0, 1)");
  const double c_norm = positive(cfg, "kernel.c_norm", 1.0);
  const double a = cfg.real_or("kernel.domain.a", 0.0);
  const double b = cfg.real_or("kernel.domain.b", 1.0);
  if (!std::isfinite(a)) throw ConfigError("kernel.domain.a", "must be finite");
  if (!(b > a) || !std::isfinite(b)) throw ConfigError("kernel.domain.b", "must exceed kernel.domain.a");
  const Domain1D domain(a, b);

  switch (*kind) {
    case KernelKind::censored_stable:
      return KernelSpec::censored_stable(sigma, domain, c_norm);
    case KernelKind::regional_stable:
      return KernelSpec::regional_stable(sigma, domain, c_norm);
    case KernelKind::table:
      break;
  }
  const fs::path path = cfg.path("kernel.table.path");
  std::vector<std::vector<double>> rows;
  try {
    rows = io::read_dense_table(path);
    return KernelSpec::table(sigma, domain, std::move(rows), c_norm);
  } catch (const Error& e) {
    throw ConfigError("kernel.table.path", e.what());
  }
}

Grid build_grid(const RunConfig& cfg, const Domain1D& domain, long intervals) {
  if (intervals < 8 || intervals > 100000) {
    throw ConfigError("grid.N", "must be an integer in [8, 100000]");
  }
  (void)cfg;
  return Grid(domain, static_cast<int>(intervals));
}

GridFunction sample_function(const RunConfig& cfg, const std::string& key, const Grid& grid,
                             const std::string& fallback) {
  const std::string spec = cfg.text_or(key, fallback);
  const auto colon = spec.find(':');
  auto numbers = [&](const std::string& body) {
    std::vector<double> out;
    for (const std::string& tok : split(body, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos) {
        throw ConfigError(key, "malformed number '" + tok + "'");
      }
      out.push_back(v);
    }
    return out;
  };

  if (colon == std::string::npos) {
    const std::vector<double> v = numbers(spec);
    if (v.size() != 1) throw ConfigError(key, "expected a single constant");
    return GridFunction(grid.size(), v.front());
  }
  const std::string name = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (name == "sin") {
    const std::vector<double> p = numbers(body);
    if (p.size() != 2 && p.size() != 3) throw ConfigError(key, "sin expects amp,k[,offset]");
    const double offset = p.size() == 3 ? p[2] : 0.0;
    return grid.sample(
        [&](double x) { return p[0] * std::sin(p[1] * std::numbers::pi * x) + offset; });
  }
  if (name == "affine") {
    const std::vector<double> p = numbers(body);
    if (p.size() != 2) throw ConfigError(key, "affine expects slope,intercept");
    return grid.sample([&](double x) { return p[0] * x + p[1]; });
  }
  if (name == "csv") {
    try {
      const io::CsvTable table = io::read_csv(cfg.resolve(body));
      if (table.rows.empty()) throw ConfigError(key, "CSV sample file is empty");
      GridFunction values = table.column(table.rows.front().size() - 1);
      if (values.size() != grid.size()) {
        throw ConfigError(key, fmt::format("CSV holds {} samples, grid has {} nodes",
                                           values.size(), grid.size()));
      }
      return values;
    } catch (const IoError& e) {
      throw ConfigError(key, e.what());
    }
  }
  throw ConfigError(key, "unknown function spec '" + name + "'");
}

ProblemSpec build_problem(const RunConfig& cfg, long intervals, bool need_lambda) {
  const KernelSpec kernel = build_kernel(cfg);
  const Grid grid = build_grid(cfg, kernel.domain(), intervals);
  ProblemSpec problem(kernel, grid);

  problem.lambda = need_lambda ? cfg.real("problem.lambda") : cfg.real_or("problem.lambda", 0.0);
  if (!(problem.lambda >= 0.0) || !std::isfinite(problem.lambda)) {
    throw ConfigError("problem.lambda", "must be a finite number >= 0");
  }
  problem.m = cfg.real("problem.m");
  if (!(problem.m > kernel.sigma()) || !std::isfinite(problem.m)) {
    throw ConfigError("problem.m", "must exceed kernel.sigma");
  }
  problem.b = sample_function(cfg, "problem.b", grid, "1");
  for (double v : problem.b) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("problem.b", "must be positive");
  }
  problem.f = sample_function(cfg, "problem.f", grid, "0");
  for (double v : problem.f) {
    if (!std::isfinite(v)) throw ConfigError("problem.f", "must be finite");
  }
  problem.u0 = sample_function(cfg, "problem.u0", grid, "0");
  for (double v : problem.u0) {
    if (!std::isfinite(v)) throw ConfigError("problem.u0", "must be finite");
  }
  const double left = cfg.real_or("problem.phi.left", 0.0);
  const double right = cfg.real_or("problem.phi.right", 0.0);
  if (!std::isfinite(left)) throw ConfigError("problem.phi.left", "must be finite");
  if (!std::isfinite(right)) throw ConfigError("problem.phi.right", "must be finite");
  problem.phi = BoundaryData::constant(left, right);
  const std::string mode_text = cfg.text_or("problem.mode", "dirichlet");
  const std::optional<BoundaryMode> mode = parse_boundary_mode(mode_text);
  if (!mode) throw ConfigError("problem.mode", "unknown boundary mode '" + mode_text + "'");
  problem.mode = *mode;
  problem.validate();
  return problem;
}

int run(const Invocation& inv, std::ostream& log, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), inv.subcommand) == names.end()) {
    err << "error: unknown subcommand '" << inv.subcommand << "'\n";
    return exit_schema;
  }
  try {
    const RunConfig cfg = RunConfig::load(inv.config);
    std::error_code ec;
    fs::create_directories(inv.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + inv.out_dir.string() + "'");

    if (inv.subcommand == "validate-kernel") {
      cmd_validate_kernel(cfg, inv.out_dir, log);
    } else if (inv.subcommand == "solve-stationary") {
      cmd_solve_stationary(cfg, inv.out_dir, log);
    } else if (inv.subcommand == "solve-parabolic") {
      cmd_solve_parabolic(cfg, inv.out_dir, log);
    } else if (inv.subcommand == "solve-ergodic") {
      cmd_solve_ergodic(cfg, inv.out_dir, log);
    } else if (inv.subcommand == "estimate-regularity") {
      cmd_estimate_regularity(cfg, inv.out_dir, log);
    } else {
      cmd_run_ltb(cfg, inv.out_dir, log);
    }
    write_manifest(inv.out_dir, inv, cfg, total_wall_seconds(start));
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "error: invalid config key " << e.what() << '\n';
    return exit_schema;
  } catch (const ConvergenceError& e) {
    err << "error: not converged: " << e.what() << '\n';
    return exit_not_converged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace censolve::cli
