#include "effsens/models.hpp"

#include <cmath>
#include <sstream>

#include "effsens/error.hpp"
#include "effsens/quadrature.hpp"
#include "effsens/rng.hpp"

namespace effsens {

Model1Config parse_model1_config(const std::string& s) {
  if (s == "a") return Model1Config::a;
  if (s == "b") return Model1Config::b;
  if (s == "c") return Model1Config::c;
  throw ArgumentError("unknown model1 configuration '" + s + "' (expected a, b or c)");
}

const char* to_string(Model1Config c) {
  switch (c) {
    case Model1Config::a: return "a";
    case Model1Config::b: return "b";
    case Model1Config::c: return "c";
  }
  return "?";
}

namespace {

double model1_upper(Model1Config c) {
  switch (c) {
    case Model1Config::a: return 1.0;
    case Model1Config::b: return 3.0;
    case Model1Config::c: return 5.0;
  }
  return 1.0;
}

void require_input(int input, std::size_t dim) {
  if (input < 1 || static_cast<std::size_t>(input) > dim) {
    std::ostringstream os;
    os << "input index " << input << " out of range 1.." << dim;
    throw ArgumentError(os.str());
  }
}

}  // namespace

BenchmarkModel model1(Model1Config config) {
  const double u = model1_upper(config);
  return {std::string("model1-") + to_string(config),
          {Interval(0.0, u), Interval(0.0, u)},
          [](std::span<const double> t) {
            const double t2 = t[1] * t[1];
            return t[0] + t2 * t2;
          }};
}

double model2_response(double t1, double t2) {
  const double t1_2 = t1 * t1;
  const double t2_2 = t2 * t2;
  const double peak = (8.0 * t1 - 2.0) * (8.0 * t1 - 2.0) + (5.0 * t2 - 3.0) * (5.0 * t2 - 3.0) + 1.0;
  return 0.2 * std::exp(t1 - 3.0) + 2.2 * std::abs(t2) + 1.3 * t2_2 * t2_2 * t2_2 - 2.0 * t2_2 -
         0.5 * t2_2 * t2_2 - 0.5 * t1_2 * t1_2 + 2.5 * t1_2 + 0.7 * t1_2 * t1 + 3.0 / peak +
         std::sin(5.0 * t1) * std::cos(3.0 * t1_2);
}

BenchmarkModel model2() {
  return {"model2",
          {Interval(-1.0, 1.0), Interval(-1.0, 1.0)},
          [](std::span<const double> t) { return model2_response(t[0], t[1]); }};
}

BenchmarkModel model_by_name(const std::string& name, const std::string& config) {
  if (name == "model1") return model1(parse_model1_config(config.empty() ? "a" : config));
  if (name == "model2") return model2();
  throw ArgumentError("unknown model '" + name + "' (expected model1 or model2)");
}

ModelSample sample_model(const BenchmarkModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("sample size must be positive");
  const std::size_t d = model.dim();
  ModelSample out{std::vector<std::vector<double>>(d, std::vector<double>(n)),
                  std::vector<double>(n)};
  for (std::size_t j = 0; j < d; ++j) {
    const CounterUniform u(seed, streams::kModelInputs + static_cast<std::uint32_t>(j));
    const Interval& iv = model.inputs[j];
    for (std::size_t i = 0; i < n; ++i) out.inputs[j][i] = iv.lo() + iv.width() * u.uniform(i);
  }
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) row[j] = out.inputs[j][i];
    out.output[i] = model.response(row);
  }
  return out;
}

double true_value_model1(Model1Config config, int input) {
  require_input(input, 2);
  const double u = model1_upper(config);
  const double mean1 = u / 2.0;                 // E tau
  const double mean4 = std::pow(u, 4) / 5.0;    // E tau^4
  if (input == 1) return u * u / 3.0 + 2.0 * mean4 * mean1 + mean4 * mean4;
  return mean1 * mean1 + 2.0 * mean1 * mean4 + std::pow(u, 8) / 9.0;
}

OracleEstimate pick_freeze_oracle(const BenchmarkModel& model, int input, std::size_t n_draws,
                                  std::uint64_t seed) {
  const std::size_t d = model.dim();
  require_input(input, d);
  if (n_draws < 1000) throw ArgumentError("pick-freeze oracle needs at least 1000 draws");
  const std::size_t keep = static_cast<std::size_t>(input - 1);
  std::vector<CounterUniform> first, second;
  for (std::size_t j = 0; j < d; ++j) {
    first.emplace_back(seed, streams::kPickFreeze + static_cast<std::uint32_t>(j));
    second.emplace_back(seed, streams::kPickFreeze + 0x100u + static_cast<std::uint32_t>(j));
  }
  std::vector<double> products(n_draws);
  std::vector<double> firsts(n_draws);
  const auto n = static_cast<std::ptrdiff_t>(n_draws);
#pragma omp parallel
  {
    std::vector<double> a(d), b(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const Interval& iv = model.inputs[j];
        a[j] = iv.lo() + iv.width() * first[j].uniform(static_cast<std::uint64_t>(i));
        b[j] = (j == keep) ? a[j]
                           : iv.lo() + iv.width() * second[j].uniform(static_cast<std::uint64_t>(i));
      }
      firsts[i] = model.response(a);
      products[i] = firsts[i] * model.response(b);
    }
  }
  double sum = 0.0;
  double sum_y = 0.0;
  for (std::size_t i = 0; i < n_draws; ++i) {
    sum += products[i];
    sum_y += firsts[i];
  }
  const double mean = sum / static_cast<double>(n_draws);
  double ss = 0.0;
  for (double p : products) ss += (p - mean) * (p - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n_draws - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n_draws)),
          sum_y / static_cast<double>(n_draws), n_draws};
}

const Model2Moments& model2_moments() {
  static const Model2Moments moments = [] {
    // |tau2| has a kink at 0: integrate each half separately.
    auto half = [](double lo, double hi) { return composite_gauss_rule(10, 150, Interval(lo, hi)); };
    QuadratureRule1D rule = half(-1.0, 0.0);
    const auto right = half(0.0, 1.0);
    rule.nodes.insert(rule.nodes.end(), right.nodes.begin(), right.nodes.end());
    rule.weights.insert(rule.weights.end(), right.weights.begin(), right.weights.end());
    const std::size_t g = rule.size();
    std::vector<double> w(g);
    for (std::size_t i = 0; i < g; ++i) w[i] = 0.5 * rule.weights[i];  // U(-1,1) density
    std::vector<double> m1(g, 0.0), m2(g, 0.0);
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t k = 0; k < g; ++k) {
        const double y = model2_response(rule.nodes[i], rule.nodes[k]);
        m1[i] += w[k] * y;
        m2[k] += w[i] * y;
        mean += w[i] * w[k] * y;
        second += w[i] * w[k] * y * y;
      }
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      e1 += w[i] * m1[i] * m1[i];
      e2 += w[i] * m2[i] * m2[i];
    }
    return Model2Moments{mean, second - mean * mean, {e1 - mean * mean, e2 - mean * mean}};
  }();
  return moments;
}

double true_value_model2(int input) {
  require_input(input, 2);
  return model2_moments().conditional_variance[input - 1];
}

}  // namespace effsens
