#include "censolve/io.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "censolve/error.hpp"

namespace censolve::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_real(std::string_view token, double& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end && !token.empty();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw IoError("header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw IoError("columns of unequal length for '" + path.string() + "'");
  }
  std::ofstream out = open_output(path);
  out << fmt::format("{}\n", fmt::join(header, ","));
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) line += ',';
      line += format_real(columns[c][r]);
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

std::vector<double> CsvTable::column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (index >= row.size()) throw IoError("CSV column index out of range");
    out.push_back(row[index]);
  }
  return out;
}

std::vector<double> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return column(i);
  }
  throw IoError("CSV has no column named '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split_commas(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (std::string_view f : fields) {
      double v = 0.0;
      if (!parse_real(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (table.rows.empty() && table.header.empty()) {
        for (std::string_view f : fields) table.header.emplace_back(f);
        width = fields.size();
        continue;
      }
      throw IoError(fmt::format("{}:{}: non-numeric field", path.string(), line_no));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw IoError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), line_no,
                                width, row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::vector<double>> read_dense_table(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  if (table.rows.empty()) throw IoError("kernel table '" + path.string() + "' has no rows");
  return std::move(table.rows);
}

void write_dense_table(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_output(path);
  std::string line;
  for (const auto& row : rows) {
    line.clear();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += ',';
      line += format_real(row[j]);
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

void write_operator(const std::filesystem::path& path, const DiscreteOperator& op,
                    const Grid& grid) {
  if (op.size() != grid.size()) throw IoError("operator does not match the grid");
  std::ofstream out = open_output(path);
  out << "i,j,w\n";
  for (std::size_t i = 0; i < op.size(); ++i) {
    for (const WeightEntry& e : op.entries(i)) {
      out << fmt::format("{},{},{}\n", i, e.index, format_real(e.weight));
    }
  }
  finish(out, path);
}

void write_field(const std::filesystem::path& path, const Grid& grid,
                 const std::vector<double>& u, std::string_view name) {
  if (u.size() != grid.size()) throw IoError("field does not match the grid");
  write_columns(path, {"x", std::string(name)}, {grid.nodes(), u});
}

void write_trajectory(const std::filesystem::path& path, const Grid& grid,
                      const Trajectory& trajectory) {
  std::ofstream out = open_output(path);
  out << "t,i,x,u\n";
  for (std::size_t k = 0; k < trajectory.snapshots(); ++k) {
    const std::string t = format_real(trajectory.times[k]);
    const GridFunction& u = trajectory.fields[k];
    if (u.size() != grid.size()) throw IoError("trajectory does not match the grid");
    for (std::size_t i = 0; i < u.size(); ++i) {
      out << fmt::format("{},{},{},{}\n", t, i, format_real(grid.node(i)), format_real(u[i]));
    }
  }
  finish(out, path);
}

}  // namespace censolve::io
