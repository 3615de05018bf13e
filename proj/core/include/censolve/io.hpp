#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "censolve/discretize.hpp"
#include "censolve/parabolic.hpp"

namespace censolve::io {

/// Shortest form that still carries 17 significant digits ("%.17g").
std::string format_real(double value);

/// Comma-separated file with a header row; all columns must share one length.
void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has no header row
  std::vector<std::vector<double>> rows;

  /// Column by header name; throws IoError if absent.
  std::vector<double> column(std::string_view name) const;
  std::vector<double> column(std::size_t index) const;
};

/// Numeric CSV reader. A first line containing a non-numeric field is taken
/// as the header.
CsvTable read_csv(const std::filesystem::path& path);

/// Square kernel table (rows of atoms), optional header row.
std::vector<std::vector<double>> read_dense_table(const std::filesystem::path& path);
void write_dense_table(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& rows);

/// Nonzero weights in long format: i,j,w.
void write_operator(const std::filesystem::path& path, const DiscreteOperator& op,
                    const Grid& grid);

/// Grid function in x,u form.
void write_field(const std::filesystem::path& path, const Grid& grid,
                 const std::vector<double>& u, std::string_view name = "u");

/// Trajectory snapshots in long format: t,i,x,u.
void write_trajectory(const std::filesystem::path& path, const Grid& grid,
                      const Trajectory& trajectory);

}  // namespace censolve::io
