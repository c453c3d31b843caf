#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace effsens::csv {

/// File could not be opened or read.
class ReadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cell is not a finite decimal number, or a row has the wrong width.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t row, std::string column)
      : std::runtime_error(msg), row_(row), column_(std::move(column)) {}
  /// 1-based data row (the header is not counted).
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

/// Numeric table: comma-separated, first row header, '.' decimal.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // columns[c][row]

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t cols() const { return header.size(); }
};

std::vector<std::string> split_line(const std::string& line);

/// Locale-independent parse of one cell; false if not a full finite number.
bool parse_number(const std::string& cell, double& out);

Table read(std::istream& in);
Table read_file(const std::string& path);

/// Resolves a column selector against the header: exact name first, then a
/// 0-based index. Throws std::invalid_argument on no or ambiguous match.
std::size_t resolve_column(const Table& t, const std::string& selector);

}  // namespace effsens::csv
