#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "censolve/kernels.hpp"
#include "censolve/problem.hpp"

namespace censolve::cli {

enum ExitStatus : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_schema = 2,
  exit_not_converged = 3,
};

const std::vector<std::string>& subcommands();

struct Invocation {
  std::string subcommand;
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
};

/// Runs one subcommand end to end and maps failures onto exit statuses.
/// Progress goes to `log`, diagnostics to `err`.
int run(const Invocation& invocation, std::ostream& log, std::ostream& err);

KernelSpec build_kernel(const RunConfig& cfg);
Grid build_grid(const RunConfig& cfg, const Domain1D& domain, long intervals);

/// Function spec: a number, `sin:amp,k[,offset]` (amp sin(k pi x) + offset),
/// `affine:slope,intercept`, or `csv:path` with one value per node.
GridFunction sample_function(const RunConfig& cfg, const std::string& key, const Grid& grid,
                             const std::string& fallback);

/// Problem section on a grid with `intervals` cells. When `need_lambda` is
/// false, problem.lambda may be omitted (treated as 0).
ProblemSpec build_problem(const RunConfig& cfg, long intervals, bool need_lambda = true);

}  // namespace censolve::cli
