#include "effsens/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "effsens/error.hpp"
#include "effsens/kernels.hpp"
#include "effsens/rng.hpp"

namespace effsens {

void FunctionalSpec::validate() const {
  if (!psi || !psi_d1 || !psi_d2 || !phi) throw ConfigError("functional spec is incomplete");
  if (!(phi_bounds.lo < phi_bounds.hi)) throw ConfigError("phi bounds must satisfy chi1 < chi2");
}

FunctionalSpec sobol_functional(PhiBounds bounds) {
  return {[](double v) { return v * v; }, [](double v) { return 2.0 * v; },
          [](double) { return 2.0; }, [](double y) { return y; }, bounds};
}

double derivative_consistency_error(const FunctionalSpec& spec, int points, std::uint64_t seed) {
  spec.validate();
  const double lo = spec.phi_bounds.lo;
  const double hi = spec.phi_bounds.hi;
  const double step = 1e-4 * (hi - lo);
  const double margin = 2.0 * step;
  CounterUniform u(seed, 0);
  double worst = 0.0;
  auto rel = [](double approx, double exact) {
    return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
  };
  for (int i = 0; i < points; ++i) {
    const double v = lo + margin + (hi - lo - 2.0 * margin) * u.uniform(i);
    const double d1 = (spec.psi(v + step) - spec.psi(v - step)) / (2.0 * step);
    const double d2 = (spec.psi_d1(v + step) - spec.psi_d1(v - step)) / (2.0 * step);
    worst = std::max({worst, rel(d1, spec.psi_d1(v)), rel(d2, spec.psi_d2(v))});
  }
  return worst;
}

SplitSizes split_sizes(std::size_t n) {
  const double nd = static_cast<double>(n);
  std::size_t n1 = 20;
  if (n > 1) n1 = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(nd / std::log(nd))), 20);
  if (n1 > n) n1 = n;
  return {n1, n - n1};
}

std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  PhiloxStream rng(seed, streams::kSplitShuffle);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

double h_value(const FunctionalSpec& spec, double m_hat, double y) {
  return (spec.phi(y) - m_hat) * spec.psi_d1(m_hat) + spec.psi(m_hat);
}

double h_term(const DensityEstimate& de, const FunctionalSpec& spec, double x, double y,
              double tol) {
  if (!de.domain().contains(x, y)) {
    std::ostringstream os;
    os << "H-term point (" << x << ", " << y << ") outside the domain";
    throw ArgumentError(os.str());
  }
  return h_value(spec, conditional_mean(de, spec.phi, spec.phi_bounds, x, tol), y);
}

KernelSection k_section(const FunctionalSpec& spec, const ConditionalMoments& moments) {
  const double m = moments.mean;
  const double kappa = 0.5 * spec.psi_d2(m) / moments.marginal;
  return [phi = spec.phi, m, kappa](double y1, double y2) {
    return kappa * ((m - phi(y1)) * (m - phi(y2)));
  };
}

namespace {

double psi_d2_sup(const FunctionalSpec& spec) {
  double sup = 0.0;
  constexpr int kProbe = 200;
  for (int i = 0; i <= kProbe; ++i) {
    const double v =
        spec.phi_bounds.lo + (spec.phi_bounds.hi - spec.phi_bounds.lo) * i / double(kProbe);
    sup = std::max(sup, std::abs(spec.psi_d2(v)));
  }
  return sup;
}

}  // namespace

SymmetricKernel k_kernel(const DensityEstimate& de, const FunctionalSpec& spec, double tol) {
  spec.validate();
  const double span = spec.phi_bounds.hi - spec.phi_bounds.lo;
  const double sup = 0.5 * psi_d2_sup(spec) * span * span / de.marginal_floor();
  return SymmetricKernel(
      [&de, spec, tol](double x) {
        return k_section(spec, conditional_moments(de, spec.phi, spec.phi_bounds, x, tol));
      },
      sup);
}

double c_plugin(const DensityEstimate& de, const FunctionalSpec& spec,
                const QuadratureRule1D& x_rule, double tol) {
  spec.validate();
  std::vector<ConditionalMoments> mom(x_rule.size());
  kernels::omp::conditional_moments(de, spec.phi, spec.phi_bounds, x_rule.nodes, tol, mom);
  double mass = 0.0;
  double cond_var = 0.0;
  double psi1 = 0.0;
  double psi2 = 0.0;
  for (std::size_t g = 0; g < x_rule.size(); ++g) {
    const double w = x_rule.weights[g] * mom[g].marginal;
    const double m = mom[g].mean;
    const double d1 = spec.psi_d1(m);
    const double p = spec.psi(m);
    mass += w;
    cond_var += w * (mom[g].second - m * m) * d1 * d1;
    psi1 += w * p;
    psi2 += w * p * p;
  }
  cond_var /= mass;
  psi1 /= mass;
  psi2 /= mass;
  return std::max(0.0, cond_var + (psi2 - psi1 * psi1));
}

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "non-finite " << what << " value " << v[i] << " at row " << i;
      throw DataError(os.str());
    }
}

void require_size(std::size_t n) {
  if (n < 40) {
    std::ostringstream os;
    os << "estimator needs at least 40 observations (got " << n << ")";
    throw ConfigError(os.str());
  }
}

}  // namespace

EstimateReport estimate_T(const SampleSet& sample, const FunctionalSpec& spec,
                          const EstimatorConfig& config) {
  const std::size_t n = sample.size();
  if (sample.y.size() != n) throw ArgumentError("sample columns differ in length");
  require_size(n);
  require_finite(sample.x, "x");
  require_finite(sample.y, "y");
  spec.validate();

  const auto perm = split_permutation(n, config.seed);
  SampleSet shuffled;
  shuffled.x.resize(n);
  shuffled.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    shuffled.x[i] = sample.x[perm[i]];
    shuffled.y[i] = sample.y[perm[i]];
  }
  const SplitSizes split = split_sizes(n);
  const SampleView all = shuffled.view();
  const SampleView prelim = all.subview(0, split.n1);
  const SampleView main = all.subview(split.n1, split.n2);

  const Domain domain = config.domain ? *config.domain : infer_domain(all, config.pad_fraction);
  require_inside(all, domain);
  const DensityEstimate de = fit_kde(prelim, domain, config.bandwidths);
  const QuadFuncContext ctx =
      QuadFuncContext::make(domain, build_index_set(split.n2, config.basis_size),
                            config.quadrature_order);

  EstimateReport report;
  report.config = config;
  report.diagnostics = {n, split.n1, split.n2, ctx.m(), de.bandwidths(), domain, 0};

  // Conditional moments at every main-sample x, shared by H and K.
  std::vector<ConditionalMoments> mom(split.n2);
  kernels::omp::conditional_moments(de, spec.phi, spec.phi_bounds, main.x(), config.simpson_tol,
                                    mom);
  double h_sum = 0.0;
  std::vector<KernelSection> sections;
  sections.reserve(split.n2);
  for (std::size_t j = 0; j < split.n2; ++j) {
    h_sum += h_value(spec, mom[j].mean, main.y(j));
    sections.push_back(k_section(spec, mom[j]));
    if (mom[j].depth_exhausted) ++report.diagnostics.simpson_depth_exhausted;
  }
  report.linear_term = h_sum / static_cast<double>(split.n2);

  const SymmetricKernel eta = k_kernel(de, spec, config.simpson_tol);
  PairVectors pv;
  kernels::omp::pair_vectors(main, sections, ctx, pv);
  ThetaEstimate theta;
  if (config.hoeffding) {
    const auto coeffs =
        coefficient_vectors(eta, ctx, [&de](double x, double y) { return de(x, y); });
    theta = theta_from_pairs(pv, coeffs.c);
    theta.hoeffding = hoeffding_from_pairs(pv, coeffs);
  } else {
    theta = theta_from_pairs(pv, crossed_coefficients(eta, ctx));
  }
  if (config.lambda) theta.lambda_hat = lambda_plugin(de, eta, ctx);
  report.quadratic_term = theta.value;
  report.theta = theta;
  report.t_hat = report.linear_term + report.quadratic_term;

  report.variance_hat = c_plugin(de, spec, ctx.x_rule, config.simpson_tol);
  const double half = 1.96 * std::sqrt(report.variance_hat / static_cast<double>(split.n2));
  report.ci_95 = {report.t_hat - half, report.t_hat + half};

  if (report.diagnostics.simpson_depth_exhausted > 0) {
    std::ostringstream os;
    os << "adaptive Simpson hit the depth limit at " << report.diagnostics.simpson_depth_exhausted
       << " main-sample points";
    report.warnings.push_back(os.str());
  }
  return report;
}

EstimateReport sobol_first_order(std::span<const std::vector<double>> inputs,
                                 std::span<const double> output, std::size_t j,
                                 const EstimatorConfig& config) {
  if (j >= inputs.size()) {
    std::ostringstream os;
    os << "input column " << j << " out of range (have " << inputs.size() << ")";
    throw ArgumentError(os.str());
  }
  const std::size_t n = output.size();
  if (inputs[j].size() != n) throw ArgumentError("input column and output differ in length");
  require_size(n);
  require_finite(inputs[j], "input");
  require_finite(output, "output");

  double mean = 0.0;
  for (double v : output) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : output) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);

  SobolBlock sobol;
  sobol.mean_y = mean;
  sobol.var_y = var;

  if (!(var > 0.0)) {
    EstimateReport report;
    report.config = config;
    const SplitSizes split = split_sizes(n);
    report.diagnostics.n = n;
    report.diagnostics.n1 = split.n1;
    report.diagnostics.n2 = split.n2;
    report.t_hat = report.linear_term = mean * mean;
    report.ci_95 = {report.t_hat, report.t_hat};
    sobol.degenerate = true;
    report.sobol = sobol;
    report.warnings.push_back(
        "output has zero variance; first-order index defined as 0 (degenerate output)");
    return report;
  }

  SampleSet sample{inputs[j], std::vector<double>(output.begin(), output.end())};
  EstimatorConfig cfg = config;
  if (!cfg.domain) cfg.domain = infer_domain(sample.view(), cfg.pad_fraction);
  const FunctionalSpec spec = sobol_functional({cfg.domain->y.lo(), cfg.domain->y.hi()});
  EstimateReport report = estimate_T(sample, spec, cfg);
  report.config = config;
  sobol.conditional_variance = report.t_hat - mean * mean;
  sobol.index_raw = sobol.conditional_variance / var;
  sobol.index_clipped = std::clamp(sobol.index_raw, 0.0, 1.0);
  report.sobol = sobol;
  return report;
}

}  // namespace effsens
