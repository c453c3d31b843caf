#include "effsens/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "effsens/csv.hpp"
#include "effsens/error.hpp"
#include "effsens/estimator.hpp"
#include "effsens/harness.hpp"
#include "effsens/models.hpp"
#include "effsens/parallel.hpp"
#include "effsens/report.hpp"

namespace effsens::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kMinRows = 40;

/// Error carrying its exit code up to run().
struct Failure {
  int code;
  std::string message;
};

struct EstimatorFlags {
  std::uint64_t seed = 0;
  std::optional<int> basis_size;
  std::vector<double> bandwidth;
  int quadrature_order = kDefaultQuadratureOrder;
  double pad_fraction = 0.0;
  std::string format = "json";
  std::string output;

  void add_to(CLI::App* app, const std::string& default_format) {
    format = default_format;
    app->add_option("--seed", seed, "Seed for the split shuffle and samplers");
    app->add_option("--basis-size", basis_size, "Basis functions per axis (default round(n2^(1/4)))")
        ->check(CLI::PositiveNumber);
    app->add_option("--bandwidth", bandwidth, "KDE bandwidths hx,hy")->delimiter(',')->expected(2);
    app->add_option("--quadrature-order", quadrature_order, "Gauss-Legendre points per axis")
        ->check(CLI::PositiveNumber);
    app->add_option("--pad-fraction", pad_fraction, "Domain padding as a fraction of the range")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("-o,--output", output, "Output file (default stdout)");
  }

  EstimatorConfig config() const {
    EstimatorConfig c;
    c.seed = seed;
    c.basis_size = basis_size;
    if (bandwidth.size() == 2) c.bandwidths = Bandwidths{bandwidth[0], bandwidth[1]};
    c.quadrature_order = quadrature_order;
    c.pad_fraction = pad_fraction;
    return c;
  }

  json to_json() const {
    json j{{"seed", seed}, {"quadrature_order", quadrature_order}, {"pad_fraction", pad_fraction}};
    j["basis_size"] = basis_size ? json(*basis_size) : json(nullptr);
    j["bandwidth"] = bandwidth.size() == 2 ? json(bandwidth) : json(nullptr);
    return j;
  }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Failure{kUnreadable, "cannot write '" + path + "'"};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// estimate --------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string output_column;
  std::string input_columns = "all";
  EstimatorFlags est;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  csv::Table table;
  try {
    table = csv::read_file(a.input);
  } catch (const csv::ReadError& e) {
    throw Failure{kUnreadable, e.what()};
  } catch (const csv::ParseError& e) {
    throw Failure{kNonNumeric, a.input + ": " + e.what()};
  }
  if (table.rows() < kMinRows)
    throw Failure{kTooFewRows, a.input + ": need at least " + std::to_string(kMinRows) +
                                   " data rows, found " + std::to_string(table.rows())};
  if (table.cols() < 2) throw Failure{kUsage, a.input + ": need at least one input and one output column"};

  std::size_t out_col = table.cols() - 1;
  std::vector<std::size_t> in_cols;
  try {
    if (!a.output_column.empty()) out_col = csv::resolve_column(table, a.output_column);
    if (a.input_columns == "all") {
      for (std::size_t c = 0; c < table.cols(); ++c)
        if (c != out_col) in_cols.push_back(c);
    } else {
      for (const auto& sel : split_list(a.input_columns)) in_cols.push_back(csv::resolve_column(table, sel));
    }
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
  if (in_cols.empty()) throw Failure{kUsage, "no input columns selected"};

  const EstimatorConfig cfg = a.est.config();
  report::IndexReport rep;
  rep.command = "estimate";
  rep.config = a.est.to_json();
  rep.config["input"] = a.input;
  rep.config["output_column"] = table.header[out_col];

  const std::vector<double>& y = table.columns[out_col];
  for (std::size_t c : in_cols) {
    const std::string& name = table.header[c];
    try {
      const EstimateReport r = sobol_first_order(std::span(&table.columns[c], 1), y, 0, cfg);
      for (const auto& w : r.warnings) err << "warning: " << name << ": " << w << '\n';
      rep.rows.push_back(report::make_row(name, r));
    } catch (const std::exception& e) {
      throw Failure{kEstimation, "column '" + name + "': " + e.what()};
    }
  }
  report::rank(rep);

  std::ostringstream text;
  if (a.est.format == "csv")
    report::write_csv(rep, text);
  else
    text << report::to_json(rep).dump(2) << '\n';
  emit(a.est.output, text.str(), out);
  return kOk;
}

// replicate -------------------------------------------------------------

struct ReplicateArgs {
  std::string model = "model1";
  std::vector<std::string> configs{"a"};
  std::vector<std::size_t> n{100};
  int reps = 25;
  std::vector<int> inputs{1, 2};
  EstimatorFlags est;
};

int cmd_replicate(const ReplicateArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.model = a.model;
  cfg.configs = a.configs;
  cfg.sample_sizes = a.n;
  cfg.replications = a.reps;
  cfg.inputs = a.inputs;
  cfg.seed_base = a.est.seed;
  cfg.estimator = a.est.config();
  ReplicationTable table;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw Failure{kUsage, e.what()};
  }
  try {
    table = run_replication(cfg);
  } catch (const std::exception& e) {
    throw Failure{kEstimation, e.what()};
  }
  std::ostringstream text;
  if (a.est.format == "json") {
    json c = a.est.to_json();
    c["model"] = a.model;
    c["configs"] = a.configs;
    c["n"] = a.n;
    c["replications"] = a.reps;
    c["inputs"] = a.inputs;
    text << report::to_json(table, c).dump(2) << '\n';
  } else {
    report::write_csv(table, text);
  }
  emit(a.est.output, text.str(), out);
  return kOk;
}

// benchmark -------------------------------------------------------------

struct BenchmarkArgs {
  std::string model = "model1";
  std::string config = "a";
  std::size_t n = 100;
  std::size_t draws = 100000;
  std::vector<int> inputs{1, 2};
  EstimatorFlags est;
};

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
  BenchmarkModel model;
  try {
    model = model_by_name(a.model, a.config);
    if (a.n < kMinRows) throw ConfigError("--n must be >= 40");
    for (int j : a.inputs)
      if (j < 1 || j > 2) throw ConfigError("input index must be 1 or 2");
  } catch (const std::exception& e) {
    throw Failure{kUsage, e.what()};
  }
  std::vector<ReplicateResult> est;
  try {
    est = run_replicate(model, a.inputs, a.n, a.est.seed, a.est.config());
  } catch (const std::exception& e) {
    throw Failure{kEstimation, e.what()};
  }
  const bool centered = a.model == "model2";
  json rows = json::array();
  std::ostringstream csv_text;
  csv_text << "model,config,input,n,quantity,t_hat,ci_lo,ci_hi,pick_freeze,pick_freeze_se,truth\n";
  for (std::size_t q = 0; q < a.inputs.size(); ++q) {
    const int j = a.inputs[q];
    OracleEstimate pf;
    try {
      pf = pick_freeze_oracle(model, j, a.draws, a.est.seed);
    } catch (const std::exception& e) {
      throw Failure{kUsage, e.what()};
    }
    const double pf_value = centered ? pf.value - pf.mean_y * pf.mean_y : pf.value;
    const double truth = true_value(a.model, a.config, j);
    rows.push_back({{"input", j},
                    {"t_hat", est[q].estimate},
                    {"ci", {est[q].ci.first, est[q].ci.second}},
                    {"pick_freeze", pf_value},
                    {"pick_freeze_se", pf.std_error},
                    {"truth", truth}});
    csv_text << model.name << ',' << (centered ? "" : a.config) << ',' << j << ',' << a.n << ','
             << quantity_name(a.model) << ',' << report::format_double(est[q].estimate) << ','
             << report::format_double(est[q].ci.first) << ','
             << report::format_double(est[q].ci.second) << ',' << report::format_double(pf_value)
             << ',' << report::format_double(pf.std_error) << ',' << report::format_double(truth)
             << '\n';
  }
  std::string text;
  if (a.est.format == "json") {
    json c = a.est.to_json();
    c["model"] = a.model;
    c["config"] = a.config;
    c["n"] = a.n;
    c["draws"] = a.draws;
    text = json{{"version", report::kSchemaVersion}, {"command", "benchmark"}, {"config", c},
                {"quantity", quantity_name(a.model)}, {"rows", rows}}
               .dump(2) +
           "\n";
  } else {
    text = csv_text.str();
  }
  emit(a.est.output, text, out);
  return kOk;
}

// oracle ----------------------------------------------------------------

struct OracleArgs {
  std::string model = "model1";
  std::string config = "a";
  int input = 1;
  std::size_t draws = 1000000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  OracleEstimate pf;
  double truth = 0.0;
  try {
    const BenchmarkModel model = model_by_name(a.model, a.config);
    pf = pick_freeze_oracle(model, a.input, a.draws, a.seed);
    truth = true_value(a.model, a.config, a.input);
  } catch (const std::exception& e) {
    throw Failure{kUsage, e.what()};
  }
  const double centered = pf.value - pf.mean_y * pf.mean_y;
  std::string text;
  if (a.format == "json") {
    text = json{{"version", report::kSchemaVersion},
                {"command", "oracle"},
                {"config",
                 {{"model", a.model}, {"config", a.config}, {"input", a.input}, {"draws", a.draws},
                  {"seed", a.seed}}},
                {"second_moment", pf.value},
                {"std_error", pf.std_error},
                {"mean_y", pf.mean_y},
                {"conditional_variance", centered},
                {"quantity", quantity_name(a.model)},
                {"truth", truth}}
               .dump(2) +
           "\n";
  } else {
    std::ostringstream s;
    s << "model,config,input,draws,second_moment,std_error,mean_y,conditional_variance,truth\n"
      << a.model << ',' << a.config << ',' << a.input << ',' << a.draws << ','
      << report::format_double(pf.value) << ',' << report::format_double(pf.std_error) << ','
      << report::format_double(pf.mean_y) << ',' << report::format_double(centered) << ','
      << report::format_double(truth) << '\n';
    text = s.str();
  }
  emit(a.output, text, out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  apply_thread_limit();

  CLI::App app{"Efficient estimation of conditional-moment functionals and Sobol indices"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "First-order indices of every input column of a CSV sample");
  c_est->add_option("-i,--input", est.input, "CSV file (header row, numeric columns)")->required();
  c_est->add_option("-y,--output-column", est.output_column, "Output column name or 0-based index (default: last)");
  c_est->add_option("-x,--input-columns", est.input_columns, "Comma-separated input columns or 'all'");
  est.est.add_to(c_est, "json");

  ReplicateArgs rep;
  auto* c_rep = app.add_subcommand("replicate", "Replication table on a built-in model");
  c_rep->add_option("--model", rep.model)->check(CLI::IsMember({"model1", "model2"}));
  c_rep->add_option("--config", rep.configs, "model1 configurations (a, b, c)")->delimiter(',');
  c_rep->add_option("--n", rep.n, "Sample sizes")->delimiter(',');
  c_rep->add_option("--reps", rep.reps, "Replications per cell");
  c_rep->add_option("--inputs", rep.inputs, "1-based input indices")->delimiter(',');
  rep.est.add_to(c_rep, "csv");

  BenchmarkArgs bench;
  auto* c_bench = app.add_subcommand("benchmark", "Estimator vs pick-freeze vs truth on a built-in model");
  c_bench->add_option("--model", bench.model)->check(CLI::IsMember({"model1", "model2"}));
  c_bench->add_option("--config", bench.config);
  c_bench->add_option("--n", bench.n, "Sample size");
  c_bench->add_option("--draws", bench.draws, "Pick-freeze draws");
  c_bench->add_option("--inputs", bench.inputs, "1-based input indices")->delimiter(',');
  bench.est.add_to(c_bench, "csv");

  OracleArgs orc;
  auto* c_orc = app.add_subcommand("oracle", "Pick-freeze Monte Carlo for E(E(Y|X_j)^2)");
  c_orc->add_option("--model", orc.model)->check(CLI::IsMember({"model1", "model2"}));
  c_orc->add_option("--config", orc.config);
  c_orc->add_option("--j", orc.input, "1-based input index");
  c_orc->add_option("--N", orc.draws, "Number of draws (>= 1000)");
  c_orc->add_option("--seed", orc.seed);
  c_orc->add_option("--format", orc.format)->check(CLI::IsMember({"json", "csv"}));
  c_orc->add_option("-o,--output", orc.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_est) return cmd_estimate(est, out, err);
    if (*c_rep) return cmd_replicate(rep, out);
    if (*c_bench) return cmd_benchmark(bench, out);
    if (*c_orc) return cmd_oracle(orc, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kEstimation;
  }
  return kUsage;
}

}  // namespace effsens::cli
