#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "effsens/csv.hpp"
#include "effsens/report.hpp"

using namespace effsens;

TEST(Csv, SplitLine) {
  EXPECT_EQ(csv::split_line("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(csv::split_line("\"x,1\",2"), (std::vector<std::string>{"x,1", "2"}));
  EXPECT_EQ(csv::split_line("\"say \"\"hi\"\"\""), (std::vector<std::string>{"say \"hi\""}));
  EXPECT_EQ(csv::split_line("1,2\r"), (std::vector<std::string>{"1", "2"}));
}

TEST(Csv, ParseNumber) {
  double v = 0.0;
  EXPECT_TRUE(csv::parse_number("1.5e-3", v));
  EXPECT_EQ(v, 1.5e-3);
  EXPECT_TRUE(csv::parse_number(" -2 ", v));
  EXPECT_EQ(v, -2.0);
  EXPECT_TRUE(csv::parse_number("+4", v));
  EXPECT_EQ(v, 4.0);
  for (const char* bad : {"", "abc", "1,5", "1.0x", "nan", "inf", "1e999"})
    EXPECT_FALSE(csv::parse_number(bad, v)) << bad;
}

TEST(Csv, ReadTable) {
  std::istringstream in("\xEF\xBB\xBFx1,x2,y\n1,2,3\n\n4,5,6\n");
  const auto t = csv::read(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x1", "x2", "y"}));
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.columns[1][1], 5.0);
  EXPECT_EQ(csv::resolve_column(t, "y"), 2u);
  EXPECT_EQ(csv::resolve_column(t, "1"), 1u);
  EXPECT_THROW(csv::resolve_column(t, "z"), std::invalid_argument);
  EXPECT_THROW(csv::resolve_column(t, "3"), std::invalid_argument);
}

TEST(Csv, ParseErrorsNameTheCell) {
  std::istringstream in("a,b\n1,2\n3,oops\n");
  try {
    csv::read(in);
    FAIL() << "expected ParseError";
  } catch (const csv::ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), "b");
  }
  std::istringstream ragged("a,b\n1,2,3\n");
  EXPECT_THROW(csv::read(ragged), csv::ParseError);
  EXPECT_THROW(csv::read_file("/nonexistent/file.csv"), csv::ReadError);
}

namespace {

report::IndexReport sample_report() {
  report::IndexReport rep;
  rep.config = {{"seed", 3}};
  report::IndexRow a;
  a.parameter = "k_x";
  a.sigma_raw = 0.1 / 3.0;
  a.sigma_clipped = a.sigma_raw;
  a.t_hat = std::nextafter(1.0, 2.0);
  a.ci = {0.9, 1.2345678901234567};
  a.n = 200;
  a.n1 = 38;
  a.n2 = 162;
  a.m_size = 16;
  a.bandwidths = std::array<double, 2>{0.0123, 1e-300};
  a.domain = std::array<double, 4>{-1.0, 1.0, 2.0 / 7.0, 3.0};
  report::IndexRow b = a;
  b.parameter = "poro";
  b.sigma_raw = 0.71;
  b.sigma_clipped = 0.71;
  b.bandwidths.reset();
  b.domain.reset();
  rep.rows = {a, b};
  return rep;
}

}  // namespace

TEST(Report, RankIsStableDescending) {
  auto rep = sample_report();
  report::IndexRow c = rep.rows[0];
  c.parameter = "tie";
  rep.rows.push_back(c);
  report::rank(rep);
  EXPECT_EQ(rep.rows[0].parameter, "poro");
  EXPECT_EQ(rep.rows[1].parameter, "k_x");
  EXPECT_EQ(rep.rows[2].parameter, "tie");
}

TEST(Report, JsonRoundTrip) {
  const auto rep = sample_report();
  const auto j = report::to_json(rep);
  EXPECT_EQ(j.at("version"), report::kSchemaVersion);
  EXPECT_TRUE(j["rows"][1]["domain"].is_null());
  const auto back = report::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.rows, rep.rows);
}

TEST(Report, JsonToCsvIsLossless) {
  auto rep = report::from_json(nlohmann::json::parse(report::to_json(sample_report()).dump()));
  for (auto& r : rep.rows) r.warnings.clear();
  std::ostringstream out;
  report::write_csv(rep, out);
  std::istringstream in(out.str());
  const auto rows = report::read_csv(in);
  ASSERT_EQ(rows.size(), rep.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i], rep.rows[i]);
}

TEST(Report, FormatDouble) {
  for (double v : {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0})
    EXPECT_EQ(std::strtod(report::format_double(v).c_str(), nullptr), v);
}
