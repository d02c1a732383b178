#include "mint/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace mint::cli {

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) +
                         (column ? ":" + std::to_string(column) : std::string()) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size() && !s.empty();
}

bool parse_index(std::string_view s, std::size_t& out) {
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size() && !s.empty();
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      for (auto f : fields) {
        if (f.empty()) throw ParseError(source, line_no, 0, "empty column name in header");
        table.header.push_back(unquote(f));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != table.cols()) {
      throw ParseError(source, line_no, 0,
                       "expected " + std::to_string(table.cols()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v) || !std::isfinite(v)) {
        throw ParseError(source, line_no, j + 1,
                         "not a finite number: '" + std::string(fields[j]) + "'");
      }
      table.values.push_back(v);
    }
    ++table.rows;
  }
  if (!have_header) throw ParseError(source, line_no, 0, "missing header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return parse_csv(in, path.string());
}

std::vector<std::size_t> select_columns(const CsvTable& table, std::string_view spec) {
  std::vector<std::size_t> out;
  for (auto item : split(spec)) {
    if (item.empty()) throw std::invalid_argument("empty column selector in '" + std::string(spec) + "'");
    const std::string name = unquote(item);
    bool found = false;
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (table.header[j] == name) {
        out.push_back(j);
        found = true;
        break;
      }
    }
    if (found) continue;
    std::size_t lo = 0, hi = 0;
    const auto dash = item.find('-');
    const bool ok = dash == std::string_view::npos
                        ? parse_index(item, lo) && (hi = lo, true)
                        : parse_index(item.substr(0, dash), lo) && parse_index(item.substr(dash + 1), hi);
    if (!ok || lo < 1 || hi < lo || hi > table.cols()) {
      throw std::invalid_argument("no column '" + name + "'");
    }
    for (std::size_t j = lo; j <= hi; ++j) out.push_back(j - 1);
  }
  return out;
}

PointSet extract(const CsvTable& table, const std::vector<std::size_t>& columns) {
  PointSet out(table.rows, columns.size());
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) out(i, j) = table(i, columns[j]);
  }
  return out;
}

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_shortest(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const PointSet& points) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.dim(); ++j) out << (j ? "," : "") << format_double(points(i, j));
    out << '\n';
  }
}

}  // namespace mint::cli
