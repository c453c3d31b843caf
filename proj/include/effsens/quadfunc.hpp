#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "effsens/density.hpp"
#include "effsens/interval.hpp"
#include "effsens/orthobasis.hpp"
#include "effsens/quadrature.hpp"
#include "effsens/sample.hpp"

namespace effsens {

inline constexpr int kDefaultQuadratureOrder = 32;

/// eta(x, ., .) at a fixed x.
using KernelSection = std::function<double(double y1, double y2)>;

/// Bounded kernel eta(x, y1, y2) = eta(x, y2, y1).
///
/// Evaluation goes through sections: all work that depends on x alone is
/// done once per section, which matters when eta is built from a density
/// estimate.
class SymmetricKernel {
 public:
  using Sectioner = std::function<KernelSection(double x)>;

  SymmetricKernel(Sectioner sectioner, double sup_bound)
      : sectioner_(std::move(sectioner)), sup_bound_(sup_bound) {}

  static SymmetricKernel from_function(std::function<double(double, double, double)> eta,
                                       double sup_bound);

  KernelSection section(double x) const { return sectioner_(x); }
  double operator()(double x, double y1, double y2) const { return sectioner_(x)(y1, y2); }
  double sup_bound() const { return sup_bound_; }

 private:
  Sectioner sectioner_;
  double sup_bound_;
};

/// Dense row-major square matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Bases, index set and Gauss rules shared by every quadratic-functional
/// computation on one domain.
struct QuadFuncContext {
  Domain domain;
  LegendreBasis1D bx;
  LegendreBasis1D by;
  BasisIndexSet index_set;
  QuadratureRule1D x_rule;
  QuadratureRule1D y_rule;
  std::vector<double> x_table;  // alpha_ix(x_g), row g, k_x columns
  std::vector<double> y_table;  // w_g * beta_iy(y_g), row g, k_y columns

  static QuadFuncContext make(const Domain& domain, const BasisIndexSet& index_set,
                              int quadrature_order = kDefaultQuadratureOrder);
  std::size_t m() const { return index_set.size(); }
};

/// A, B and C of the Hoeffding decomposition for a density f:
/// a_i = int f p_i, b_i = int g p_i with g(x,y) = int f(x,u) eta(x,y,u) du,
/// c_ii' = int p_i(x,y1) p_i'(x,y2) eta(x,y1,y2).
struct CoefficientVectors {
  std::vector<double> a;
  std::vector<double> b;
  SquareMatrix c;
};

/// C alone, on the shared 3D Gauss grid (exactly symmetric).
SquareMatrix crossed_coefficients(const SymmetricKernel& eta, const QuadFuncContext& ctx);

CoefficientVectors coefficient_vectors(const SymmetricKernel& eta, const QuadFuncContext& ctx,
                                       const BivariateFn& f);

/// Per-point vectors over M for the main sample, row-major n x m:
/// s(j, i) = p_i(X_j, Y_j), t(j, i) = int p_i(X_j, u) eta(X_j, u, Y_j) du.
struct PairVectors {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> s;
  std::vector<double> t;

  std::span<const double> s_row(std::size_t j) const { return {s.data() + j * m, m}; }
  std::span<const double> t_row(std::size_t j) const { return {t.data() + j * m, m}; }
};

struct HoeffdingTerms {
  double u_k = 0.0;       // U_n K, degenerate part
  double p_l = 0.0;       // P_n L, linear part
  double headline = 0.0;  // 2 A'B - A'CA
  double sum() const { return u_k + p_l + headline; }
};

struct ThetaEstimate {
  double value = 0.0;             // term_linear_pair - term_bilinear
  double term_linear_pair = 0.0;  // 2/(n(n-1)) sum_i sum_{j!=k} s_ji t_ki
  double term_bilinear = 0.0;     // 1/(n(n-1)) sum_ii' sum_{j!=k} s_ji s_ki' c_ii'
  std::optional<HoeffdingTerms> hoeffding;
  std::optional<double> lambda_hat;
};

/// Throws ArgumentError naming the first main-sample point outside the domain.
void require_inside(SampleView sample, const Domain& domain);

/// theta-hat from the pair vectors and C, via sum_{j!=k} s_j t_k =
/// (sum s)(sum t) - sum s_j t_j. Requires n >= 3.
ThetaEstimate theta_from_pairs(const PairVectors& pv, const SquareMatrix& c);

/// The same quantity split as U_n K + P_n L + 2A'B - A'CA.
HoeffdingTerms hoeffding_from_pairs(const PairVectors& pv, const CoefficientVectors& coeffs);

/// Crossed-quadratic estimator of theta = int eta(x,y1,y2) f(x,y1) f(x,y2).
ThetaEstimate estimate_theta(SampleView main, const SymmetricKernel& eta,
                             const QuadFuncContext& ctx);

/// Hoeffding terms with A and B taken from the density f.
HoeffdingTerms hoeffding_decompose(SampleView main, const SymmetricKernel& eta,
                                   const QuadFuncContext& ctx, const BivariateFn& f);

/// Plug-in Lambda = 4 [int g^2 f - (int g f)^2], clamped at 0.
double lambda_plugin(const BivariateFn& f, const SymmetricKernel& eta, const QuadFuncContext& ctx);
double lambda_plugin(const DensityEstimate& de, const SymmetricKernel& eta,
                     const QuadFuncContext& ctx);

}  // namespace effsens
