#include "effsens/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace effsens::csv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(trim(cell));
  return out;
}

bool parse_number(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

Table read(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      t.header = std::move(cells);
      t.columns.assign(t.header.size(), {});
      have_header = true;
      continue;
    }
    const std::size_t row = t.rows() + 1;
    const std::string where = "row " + std::to_string(row) + " (line " + std::to_string(line_no) + ")";
    if (cells.size() != t.header.size())
      throw ParseError(where + ": expected " + std::to_string(t.header.size()) +
                           " fields, found " + std::to_string(cells.size()),
                       row, "");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v))
        throw ParseError(where + ", column '" + t.header[c] + "': not a finite number: '" +
                             cells[c] + "'",
                         row, t.header[c]);
      t.columns[c].push_back(v);
    }
  }
  if (in.bad()) throw ReadError("read error");
  return t;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReadError("cannot open '" + path + "'");
  try {
    return read(in);
  } catch (const ReadError&) {
    throw ReadError("read error on '" + path + "'");
  }
}

std::size_t resolve_column(const Table& t, const std::string& selector) {
  const auto n = std::count(t.header.begin(), t.header.end(), selector);
  if (n > 1) throw std::invalid_argument("column name '" + selector + "' is ambiguous");
  if (n == 1)
    return static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), selector) -
                                    t.header.begin());
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), idx);
  if (ec == std::errc() && ptr == selector.data() + selector.size() && !selector.empty()) {
    if (idx < t.cols()) return idx;
    throw std::invalid_argument("column index " + selector + " out of range (0.." +
                                std::to_string(t.cols() == 0 ? 0 : t.cols() - 1) + ")");
  }
  throw std::invalid_argument("no column named '" + selector + "'");
}

}  // namespace effsens::csv
