#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mint/point_set.hpp"

namespace mint::cli {

/// Malformed input. line and column are 1-based; column is 0 when the
/// problem is with the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Numeric table with a header row, stored row-major.
struct CsvTable {
  std::vector<std::string> header;
  std::size_t rows = 0;
  std::vector<double> values;

  std::size_t cols() const noexcept { return header.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
};

CsvTable parse_csv(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv(const std::filesystem::path& path);

/// Resolves a comma-separated list of column names or 1-based indices to
/// 0-based positions. A name match wins over an index reading, and a range
/// such as "2-4" is accepted for indices.
std::vector<std::size_t> select_columns(const CsvTable& table, std::string_view spec);

PointSet extract(const CsvTable& table, const std::vector<std::size_t>& columns);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Shortest text that reads back to the same double.
std::string format_shortest(double value);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const PointSet& points);

}  // namespace mint::cli
