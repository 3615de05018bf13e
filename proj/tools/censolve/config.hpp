#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace censolve::cli {

/// Schema violation tied to one config key (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Flat `dotted.key = value` file. Blank lines and lines starting with '#'
/// are ignored; keys must be known and appear once.
class RunConfig {
 public:
  static RunConfig parse(std::istream& in, std::filesystem::path base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;

  double real(const std::string& key) const;
  double real_or(const std::string& key, double fallback) const;
  std::optional<double> real_opt(const std::string& key) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;
  std::vector<double> reals_or(const std::string& key, std::vector<double> fallback) const;

  /// Relative paths in values resolve against the config file's directory.
  std::filesystem::path path(const std::string& key) const;
  std::filesystem::path resolve(const std::string& value) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  static const std::vector<std::string>& known_keys();

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::filesystem::path base_dir_;
};

}  // namespace censolve::cli
