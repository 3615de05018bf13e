#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

namespace censolve::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return !token.empty() && ec == std::errc() && ptr == end;
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "kernel.kind",      "kernel.sigma",      "kernel.c_norm",     "kernel.domain.a",
      "kernel.domain.b",  "kernel.table.path", "grid.N",            "problem.lambda",
      "problem.m",        "problem.b",         "problem.f",         "problem.phi.left",
      "problem.phi.right", "problem.u0",       "problem.mode",      "run.tol",
      "run.max_iter",     "run.T",             "run.store_every",   "run.max_dt",
      "run.alpha0",       "run.alpha_levels",  "run.window",        "run.ltb_mode",
      "run.c_margin",     "run.seed",          "run.gammas",        "run.levels",
      "run.x_star",       "run.beta",          "run.barrier_alpha", "run.barrier_c1",
  };
  return keys;
}

RunConfig RunConfig::parse(std::istream& in, std::filesystem::path base_dir) {
  RunConfig cfg;
  cfg.base_dir_ = std::move(base_dir);
  const auto& known = known_keys();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(key, "unknown key");
    }
    if (cfg.has(key)) throw ConfigError(key, "duplicate key");
    if (value.empty()) throw ConfigError(key, "empty value");
    cfg.entries_.emplace_back(std::move(key), std::move(value));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path.string() + "'");
  return parse(in, path.parent_path());
}

bool RunConfig::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

const std::string& RunConfig::text(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw ConfigError(key, "missing required key");
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double RunConfig::real(const std::string& key) const {
  double v = 0.0;
  if (!parse_double(text(key), v)) throw ConfigError(key, "expected a number");
  return v;
}

double RunConfig::real_or(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

std::optional<double> RunConfig::real_opt(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return real(key);
}

long RunConfig::integer(const std::string& key) const {
  const std::string& s = text(key);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected an integer");
  }
  return v;
}

long RunConfig::integer_or(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> RunConfig::reals_or(const std::string& key,
                                        std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  const std::string& s = text(key);
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    const std::string token =
        trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    double v = 0.0;
    if (!parse_double(token, v)) throw ConfigError(key, "expected a comma-separated number list");
    out.push_back(v);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::filesystem::path RunConfig::resolve(const std::string& value) const {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base_dir_ / p;
}

std::filesystem::path RunConfig::path(const std::string& key) const { return resolve(text(key)); }

}  // namespace censolve::cli
