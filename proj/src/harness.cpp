#include "effsens/harness.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "effsens/error.hpp"

namespace effsens {

void ExperimentConfig::validate() const {
  if (model != "model1" && model != "model2")
    throw ConfigError("unknown model '" + model + "' (expected model1 or model2)");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (sample_sizes.empty()) throw ConfigError("no sample sizes given");
  for (std::size_t n : sample_sizes)
    if (n < 40) throw ConfigError("sample sizes must be >= 40, got " + std::to_string(n));
  if (inputs.empty()) throw ConfigError("no inputs given");
  for (int j : inputs)
    if (j < 1 || j > 2) throw ConfigError("input index must be 1 or 2, got " + std::to_string(j));
  if (model == "model1") {
    if (configs.empty()) throw ConfigError("model1 needs at least one configuration");
    for (const auto& c : configs) parse_model1_config(c);
  }
}

double true_value(const std::string& model, const std::string& config, int input) {
  if (model == "model1") return true_value_model1(parse_model1_config(config), input);
  if (model == "model2") return true_value_model2(input);
  throw ArgumentError("unknown model '" + model + "'");
}

std::string quantity_name(const std::string& model) {
  return model == "model2" ? "Var(E(Y|X))" : "E(E(Y|X)^2)";
}

std::uint64_t replicate_seed(std::uint64_t seed_base, int r) {
  return seed_base ^ static_cast<std::uint64_t>(r);
}

std::vector<ReplicateResult> run_replicate(const BenchmarkModel& model,
                                           const std::vector<int>& inputs, std::size_t n,
                                           std::uint64_t seed, const EstimatorConfig& estimator) {
  const ModelSample s = sample_model(model, n, seed);
  EstimatorConfig ec = estimator;
  ec.seed = seed;
  const bool centered = model.name == "model2";
  std::vector<ReplicateResult> out;
  out.reserve(inputs.size());
  for (int j : inputs) {
    const EstimateReport rep =
        sobol_first_order(s.inputs, s.output, static_cast<std::size_t>(j - 1), ec);
    const double shift = centered ? rep.sobol->mean_y * rep.sobol->mean_y : 0.0;
    out.push_back({rep.t_hat - shift, {rep.ci_95.first - shift, rep.ci_95.second - shift}});
  }
  return out;
}

std::vector<std::vector<ReplicateResult>> run_cell(const ExperimentConfig& cfg,
                                                   const std::string& config, std::size_t n) {
  const BenchmarkModel model = model_by_name(cfg.model, config);
  const int reps = cfg.replications;
  std::vector<std::vector<ReplicateResult>> results(static_cast<std::size_t>(reps));
  std::vector<std::string> errors(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < reps; ++r) {
    try {
      results[r] = run_replicate(model, cfg.inputs, n, replicate_seed(cfg.seed_base, r),
                                 cfg.estimator);
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
  }
  for (int r = 0; r < reps; ++r) {
    if (!errors[r].empty()) {
      std::ostringstream os;
      os << "cell " << model.name << " n=" << n << " replicate " << r << " (seed "
         << replicate_seed(cfg.seed_base, r) << ") failed: " << errors[r];
      throw ConfigError(os.str());
    }
  }
  return results;
}

ReplicationRow summarize(const std::string& model, const std::string& config, int input,
                         std::size_t n, const std::vector<ReplicateResult>& results) {
  ReplicationRow row;
  row.model = model;
  row.config = model == "model1" ? config : "";
  row.input = input;
  row.n = n;
  row.quantity = quantity_name(model);
  row.truth = true_value(model, config, input);
  row.replications = static_cast<int>(results.size());
  if (results.empty()) return row;
  double sum = 0.0;
  int covered = 0;
  for (const auto& r : results) {
    sum += r.estimate;
    if (r.ci.first <= row.truth && row.truth <= r.ci.second) ++covered;
  }
  const double k = static_cast<double>(results.size());
  row.mean = sum / k;
  double ss = 0.0;
  for (const auto& r : results) ss += (r.estimate - row.mean) * (r.estimate - row.mean);
  row.std = results.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
  row.coverage = covered / k;
  return row;
}

ReplicationTable run_replication(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<std::string> configs =
      cfg.model == "model1" ? cfg.configs : std::vector<std::string>{""};
  ReplicationTable table;
  for (const auto& config : configs) {
    for (std::size_t n : cfg.sample_sizes) {
      const auto cell = run_cell(cfg, config, n);
      for (std::size_t q = 0; q < cfg.inputs.size(); ++q) {
        std::vector<ReplicateResult> column;
        column.reserve(cell.size());
        for (const auto& rep : cell) column.push_back(rep[q]);
        table.rows.push_back(summarize(cfg.model, config, cfg.inputs[q], n, column));
      }
    }
  }
  return table;
}

}  // namespace effsens
