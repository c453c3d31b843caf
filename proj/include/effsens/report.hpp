#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "effsens/estimator.hpp"
#include "effsens/harness.hpp"

namespace effsens::report {

inline constexpr int kSchemaVersion = 1;

struct IndexRow {
  std::string parameter;
  double sigma_raw = 0.0;
  double sigma_clipped = 0.0;
  double t_hat = 0.0;
  std::array<double, 2> ci{0.0, 0.0};
  std::size_t n = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t m_size = 0;
  std::optional<std::array<double, 2>> bandwidths;  // hx, hy
  std::optional<std::array<double, 4>> domain;      // x_lo, x_hi, y_lo, y_hi
  std::vector<std::string> warnings;

  bool operator==(const IndexRow&) const = default;
};

struct IndexReport {
  int version = kSchemaVersion;
  std::string command = "estimate";
  nlohmann::json config = nlohmann::json::object();
  std::vector<IndexRow> rows;
};

IndexRow make_row(const std::string& parameter, const EstimateReport& r);

/// Stable sort by sigma_raw, largest first.
void rank(IndexReport& rep);

nlohmann::json to_json(const IndexReport& rep);
IndexReport from_json(const nlohmann::json& j);

/// One line per row, numbers at 17 significant digits; warnings are not
/// part of the CSV form.
void write_csv(const IndexReport& rep, std::ostream& out);
std::vector<IndexRow> read_csv(std::istream& in);

nlohmann::json to_json(const ReplicationTable& table, const nlohmann::json& config);
void write_csv(const ReplicationTable& table, std::ostream& out);

std::string format_double(double v);

}  // namespace effsens::report
