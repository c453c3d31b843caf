#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "effsens/estimator.hpp"
#include "effsens/models.hpp"

namespace effsens {

struct ExperimentConfig {
  std::string model = "model1";        // model1 | model2
  std::vector<std::string> configs{"a"};  // model1 only
  std::vector<int> inputs{1, 2};       // 1-based
  std::vector<std::size_t> sample_sizes{100};
  int replications = 25;
  std::uint64_t seed_base = 0;
  EstimatorConfig estimator;  // seed is overwritten per replicate

  void validate() const;
};

/// One replicate of one cell. Model 1 cells report T-hat = E(E(Y|tau_j)^2);
/// model 2 cells report T-hat - mean(Y)^2 = Var(E(Y|tau_j)).
struct ReplicateResult {
  double estimate = 0.0;
  std::pair<double, double> ci{0.0, 0.0};
};

struct ReplicationRow {
  std::string model;
  std::string config;
  int input = 1;
  std::size_t n = 0;
  std::string quantity;
  double truth = 0.0;
  double mean = 0.0;
  double std = 0.0;  // n-1 denominator, 0 for a single replicate
  double coverage = 0.0;
  int replications = 0;
};

struct ReplicationTable {
  std::vector<ReplicationRow> rows;
};

/// Closed form (model 1) or quadrature oracle (model 2).
double true_value(const std::string& model, const std::string& config, int input);
std::string quantity_name(const std::string& model);

/// Seed of replicate r: seed_base XOR r.
std::uint64_t replicate_seed(std::uint64_t seed_base, int r);

/// Runs one seeded replicate: sample the model, estimate every requested
/// input on the same sample.
std::vector<ReplicateResult> run_replicate(const BenchmarkModel& model,
                                           const std::vector<int>& inputs, std::size_t n,
                                           std::uint64_t seed, const EstimatorConfig& estimator);

/// Per-replicate results for one (config, n), indexed [replicate][input].
/// Replicates run in parallel. Throws ConfigError naming the cell and
/// replicate if any replicate fails.
std::vector<std::vector<ReplicateResult>> run_cell(const ExperimentConfig& cfg,
                                                   const std::string& config, std::size_t n);

ReplicationRow summarize(const std::string& model, const std::string& config, int input,
                         std::size_t n, const std::vector<ReplicateResult>& results);

ReplicationTable run_replication(const ExperimentConfig& cfg);

}  // namespace effsens
