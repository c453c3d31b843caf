#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "effsens/density.hpp"
#include "effsens/quadfunc.hpp"
#include "effsens/sample.hpp"

namespace effsens {

/// T(f) = E(psi(E(phi(Y) | X))). psi and its first two derivatives must be
/// defined on [chi1, chi2], the range of phi.
struct FunctionalSpec {
  ScalarFn psi;
  ScalarFn psi_d1;
  ScalarFn psi_d2;
  ScalarFn phi;
  PhiBounds phi_bounds{0.0, 1.0};

  void validate() const;
};

/// psi(xi) = xi^2, phi(y) = y: T(f) = E(E(Y|X)^2).
FunctionalSpec sobol_functional(PhiBounds bounds);

/// Largest relative error of central finite differences against psi_d1 and
/// psi_d2 over `points` uniform draws in [chi1, chi2].
double derivative_consistency_error(const FunctionalSpec& spec, int points, std::uint64_t seed);

struct EstimatorConfig {
  std::uint64_t seed = 0;
  std::optional<int> basis_size;  // k per axis; default round(n2^(1/4))
  std::optional<Bandwidths> bandwidths;
  std::optional<Domain> domain;  // default: inferred from the full sample
  int quadrature_order = kDefaultQuadratureOrder;
  double pad_fraction = 0.0;
  double simpson_tol = kDefaultSimpsonTol;
  bool hoeffding = false;  // also report the Hoeffding split of theta-hat
  bool lambda = false;     // also report the plug-in Lambda
};

struct SplitSizes {
  std::size_t n1;
  std::size_t n2;
};

/// n1 = max(ceil(n / ln n), 20), n2 = n - n1.
SplitSizes split_sizes(std::size_t n);

/// Seeded Fisher-Yates permutation of 0..n-1 (Philox stream kSplitShuffle).
std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed);

struct SobolBlock {
  double index_raw = 0.0;
  double index_clipped = 0.0;  // index_raw clamped into [0, 1]
  double mean_y = 0.0;
  double var_y = 0.0;
  double conditional_variance = 0.0;  // T-hat - mean_y^2
  bool degenerate = false;
};

struct Diagnostics {
  std::size_t n = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t m_size = 0;
  std::optional<Bandwidths> bandwidths;
  std::optional<Domain> domain;
  std::size_t simpson_depth_exhausted = 0;
};

struct EstimateReport {
  double t_hat = 0.0;
  double linear_term = 0.0;
  double quadratic_term = 0.0;
  double variance_hat = 0.0;
  std::pair<double, double> ci_95{0.0, 0.0};
  std::optional<SobolBlock> sobol;
  std::optional<ThetaEstimate> theta;
  EstimatorConfig config;
  Diagnostics diagnostics;
  std::vector<std::string> warnings;
};

/// H(f-hat, x, y) = [phi(y) - m](psi'(m)) + psi(m) for a given m = m-hat(x).
double h_value(const FunctionalSpec& spec, double m_hat, double y);
double h_term(const DensityEstimate& de, const FunctionalSpec& spec, double x, double y,
              double tol = kDefaultSimpsonTol);

/// K(f-hat, x, y, z) section at x from precomputed conditional moments.
KernelSection k_section(const FunctionalSpec& spec, const ConditionalMoments& moments);
SymmetricKernel k_kernel(const DensityEstimate& de, const FunctionalSpec& spec,
                         double tol = kDefaultSimpsonTol);

/// Plug-in asymptotic variance
/// C = E_f[(v - m^2) psi'(m)^2] + Var_f(psi(m)), expectations under f-hat.
double c_plugin(const DensityEstimate& de, const FunctionalSpec& spec,
                const QuadratureRule1D& x_rule, double tol = kDefaultSimpsonTol);

/// Full pipeline: shuffle, split, fit f-hat on n1 points, linear H-term plus
/// crossed-quadratic K-term on the n2 others, plug-in variance and 95% CI.
EstimateReport estimate_T(const SampleSet& sample, const FunctionalSpec& spec,
                          const EstimatorConfig& config = {});

/// First-order Sobol index of input column j (0-based) of `inputs`
/// (column-major: inputs[j][row]).
EstimateReport sobol_first_order(std::span<const std::vector<double>> inputs,
                                 std::span<const double> output, std::size_t j,
                                 const EstimatorConfig& config = {});

}  // namespace effsens
