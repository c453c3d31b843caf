#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "effsens/cli.hpp"
#include "effsens/models.hpp"
#include "effsens/rng.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace effsens;
using nlohmann::json;
using testing_support::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "effsens");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_csv(const TempDir& dir, const std::string& name,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  const auto path = dir.file(name);
  std::ofstream f(path);
  for (std::size_t c = 0; c < header.size(); ++c) f << (c ? "," : "") << header[c];
  f << '\n';
  f.precision(17);
  for (std::size_t r = 0; r < columns.front().size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << columns[c][r];
    f << '\n';
  }
  return path;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"estimate"}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, UnreadableInput) {
  const auto r = run({"estimate", "-i", "/nonexistent/sample.csv"});
  EXPECT_EQ(r.code, cli::kUnreadable);
  EXPECT_NE(r.err.find("/nonexistent/sample.csv"), std::string::npos);
}

TEST(Cli, NonNumericCell) {
  TempDir dir;
  const auto path = dir.file("bad.csv");
  {
    std::ofstream f(path);
    f << "a,b\n";
    for (int i = 0; i < 50; ++i) f << i << ',' << (i == 7 ? "x7" : std::to_string(i)) << '\n';
  }
  const auto r = run({"estimate", "-i", path});
  EXPECT_EQ(r.code, cli::kNonNumeric);
  EXPECT_NE(r.err.find("row 8"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("'b'"), std::string::npos) << r.err;
}

TEST(Cli, TooFewRows) {
  TempDir dir;
  const auto empty = dir.file("empty.csv");
  std::ofstream(empty).close();
  EXPECT_EQ(run({"estimate", "-i", empty}).code, cli::kTooFewRows);
  const auto header_only = dir.file("header.csv");
  std::ofstream(header_only) << "a,b\n";
  EXPECT_EQ(run({"estimate", "-i", header_only}).code, cli::kTooFewRows);
  const std::vector<double> v(39, 1.0);
  EXPECT_EQ(run({"estimate", "-i", write_csv(dir, "short.csv", {"a", "b"}, {v, v})}).code,
            cli::kTooFewRows);
}

TEST(Cli, BadColumnSelector) {
  TempDir dir;
  std::vector<double> v(50);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const auto path = write_csv(dir, "ok.csv", {"a", "b"}, {v, v});
  EXPECT_EQ(run({"estimate", "-i", path, "-y", "zz"}).code, cli::kUsage);
  EXPECT_EQ(run({"estimate", "-i", path, "-x", "a,9"}).code, cli::kUsage);
}

TEST(Cli, ConstantOutputIsZeroWithWarning) {
  TempDir dir;
  const auto smp = sample_model(model1(Model1Config::a), 200, 1);
  const std::vector<double> y(200, 1.5);
  const auto path = write_csv(dir, "const.csv", {"t1", "t2", "y"}, {smp.inputs[0], smp.inputs[1], y});
  const auto r = run({"estimate", "-i", path});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = json::parse(r.out);
  for (const auto& row : j["rows"]) EXPECT_EQ(row["sigma_raw"].get<double>(), 0.0);
  EXPECT_NE(r.err.find("warning: t1:"), std::string::npos) << r.err;
}

TEST(Cli, DuplicatedColumnIndexNearOne) {
  TempDir dir;
  const auto smp = sample_model(model1(Model1Config::a), 1000, 2);
  const auto path = write_csv(dir, "dup.csv", {"t1", "t2", "y"},
                              {smp.inputs[0], smp.inputs[1], smp.inputs[1]});
  const auto r = run({"estimate", "-i", path, "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["command"], "estimate");
  EXPECT_EQ(j["rows"][0]["parameter"], "t2");
  const double s = j["rows"][0]["sigma_raw"].get<double>();
  EXPECT_GE(s, 0.85);
  EXPECT_LE(s, 1.1);
  for (const char* key : {"sigma_clipped", "t_hat", "ci", "n", "n1", "n2", "m_size", "bandwidths", "domain"})
    EXPECT_TRUE(j["rows"][0].contains(key)) << key;
}

TEST(Cli, SevenColumnRankedReport) {
  TempDir dir;
  const std::size_t n = 200;
  std::vector<std::vector<double>> cols(7, std::vector<double>(n));
  const CounterUniform u(5, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double y = 0.0;
    for (std::size_t c = 0; c < 6; ++c) {
      cols[c][i] = u.uniform(i * 6 + c);
      y += (c == 0 ? 4.0 : c == 1 ? 1.0 : 0.0) * cols[c][i];
    }
    cols[6][i] = y;
  }
  const auto path = write_csv(dir, "punq.csv", {"p1", "p2", "p3", "p4", "p5", "p6", "out"}, cols);
  const auto out_path = dir.file("report.csv");
  const auto r = run({"estimate", "-i", path, "--format", "csv", "-o", out_path});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::ifstream f(out_path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(f, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[1].rfind("1,p1,", 0), 0u) << lines[1];
}

TEST(Cli, UnwritableOutput) {
  const auto r = run({"oracle", "--N", "1000", "-o", "/nonexistent/dir/out.json"});
  EXPECT_EQ(r.code, cli::kUnreadable);
}

TEST(Cli, Oracle) {
  const auto r = run({"oracle", "--model", "model1", "--config", "a", "--j", "1", "--N", "1000000"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["second_moment"].get<double>(), 0.5733, 0.002);
  EXPECT_NEAR(j["truth"].get<double>(), 0.573333333333, 1e-9);
}

TEST(Cli, Benchmark) {
  const auto r = run({"benchmark", "--model", "model2", "--n", "100", "--draws", "20000", "--format", "json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  for (const auto& row : j["rows"])
    for (const char* key : {"t_hat", "pick_freeze", "truth"}) EXPECT_TRUE(row[key].is_number()) << key;
  EXPECT_NEAR(j["rows"][0]["truth"].get<double>(), 1.0932, 1e-3);
}

TEST(Cli, Replicate) {
  const auto r = run({"replicate", "--model", "model1", "--config", "a,b", "--n", "60", "--reps", "3"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 5);
  EXPECT_EQ(run({"replicate", "--n", "20"}).code, cli::kUsage);
}
