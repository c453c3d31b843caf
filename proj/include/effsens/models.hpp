#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "effsens/interval.hpp"

namespace effsens {

/// Independent uniform inputs on per-input intervals and a deterministic
/// response Y = Phi(tau).
struct BenchmarkModel {
  std::string name;
  std::vector<Interval> inputs;
  std::function<double(std::span<const double>)> response;

  std::size_t dim() const { return inputs.size(); }
};

enum class Model1Config { a, b, c };

Model1Config parse_model1_config(const std::string& s);
const char* to_string(Model1Config c);

/// Y = tau1 + tau2^4, tau_j ~ U(0, u) with u = 1, 3, 5 for configs a, b, c.
BenchmarkModel model1(Model1Config config);

/// Y = 0.2 exp(tau1 - 3) + 2.2|tau2| + 1.3 tau2^6 - 2 tau2^2 - 0.5 tau2^4
///     - 0.5 tau1^4 + 2.5 tau1^2 + 0.7 tau1^3
///     + 3 / ((8 tau1 - 2)^2 + (5 tau2 - 3)^2 + 1) + sin(5 tau1) cos(3 tau1^2),
/// tau_j ~ U(-1, 1).
BenchmarkModel model2();
double model2_response(double tau1, double tau2);

/// Model lookup by name ("model1" needs a config letter; "model2" ignores it).
BenchmarkModel model_by_name(const std::string& name, const std::string& config);

struct ModelSample {
  std::vector<std::vector<double>> inputs;  // inputs[j][row]
  std::vector<double> output;
};

/// n rows; input j of row i is the Philox uniform (seed, stream
/// kModelInputs + j, index i) mapped onto the input interval.
ModelSample sample_model(const BenchmarkModel& model, std::size_t n, std::uint64_t seed);

/// E(E(Y | tau_j)^2) for model 1 in closed form; input is 1 or 2.
double true_value_model1(Model1Config config, int input);

struct OracleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double mean_y = 0.0;  // mean of Y over the first draw set
  std::size_t n = 0;
};

/// Pick-freeze Monte Carlo for E(E(Y | tau_j)^2): mean of Y * Y' where Y'
/// keeps tau_j and redraws every other input. input is 1-based. N >= 1000.
OracleEstimate pick_freeze_oracle(const BenchmarkModel& model, int input, std::size_t n_draws,
                                  std::uint64_t seed);

/// Model 2 moments by composite Gauss tensor quadrature (cached).
struct Model2Moments {
  double mean;
  double variance;
  double conditional_variance[2];  // Var(E(Y | tau_1)), Var(E(Y | tau_2))
};
const Model2Moments& model2_moments();

/// Var(E(Y | tau_j)) for model 2; input is 1 or 2.
double true_value_model2(int input);

}  // namespace effsens
