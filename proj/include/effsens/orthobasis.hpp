#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "effsens/interval.hpp"
#include "effsens/quadrature.hpp"

namespace effsens {

/// Orthonormal shifted Legendre polynomials on an interval:
/// alpha_k(x) = sqrt((2k+1)/width) * P_k(t), t = (2x - lo - hi) / width,
/// so that the integral of alpha_j * alpha_k over the interval is delta_jk.
class LegendreBasis1D {
 public:
  LegendreBasis1D(Interval interval, int max_degree);

  const Interval& interval() const { return interval_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return static_cast<std::size_t>(max_degree_) + 1; }

  /// Value of the degree-`degree` basis function at x. Throws ArgumentError
  /// when degree > max_degree or x lies outside the interval.
  double eval(int degree, double x) const;

  /// Writes alpha_0(x) .. alpha_{max_degree}(x) into out (size() entries),
  /// using the three-term recurrence once for all degrees.
  void eval_all(double x, std::span<double> out) const;

 private:
  void check_point(double x) const;

  Interval interval_;
  int max_degree_;
  std::vector<double> norms_;  // sqrt((2k+1)/width)
};

/// Tensor index (i_alpha, i_beta) of p_i(x,y) = alpha_{i_alpha}(x) beta_{i_beta}(y).
struct TensorIndex {
  int ix;
  int iy;
  friend bool operator==(const TensorIndex&, const TensorIndex&) = default;
};

/// Finite index set M. The rectangular scheme stores pairs in row-major
/// order: position(ix, iy) = ix * k_y + iy.
class BasisIndexSet {
 public:
  static BasisIndexSet rectangular(int k_x, int k_y);

  const std::vector<TensorIndex>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  int k_x() const { return k_x_; }
  int k_y() const { return k_y_; }
  std::size_t position(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(k_y_) +
           static_cast<std::size_t>(iy);
  }

 private:
  BasisIndexSet(int k_x, int k_y);

  std::vector<TensorIndex> pairs_;
  int k_x_;
  int k_y_;
};

/// Rectangular k x k set with k = round(n2^(1/4)) (so |M| is close to
/// sqrt(n2)) unless k_override is given. Requires n2 >= 4.
BasisIndexSet build_index_set(std::size_t n2, std::optional<int> k_override = std::nullopt);

/// p_index(x, y) for the given bases.
double tensor_eval(const LegendreBasis1D& bx, const LegendreBasis1D& by, TensorIndex index,
                   double x, double y);

using BivariateFn = std::function<double(double, double)>;

/// a_i = double integral of target * p_i for every i in M, under the rule.
/// Ordering matches M.pairs().
std::vector<double> project_coefficients(const BivariateFn& target, const BasisIndexSet& index_set,
                                         const LegendreBasis1D& bx, const LegendreBasis1D& by,
                                         const QuadratureRule2D& rule);

/// sum_i coeffs[i] * p_i(x, y).
double evaluate_projection(std::span<const double> coeffs, const BasisIndexSet& index_set,
                           const LegendreBasis1D& bx, const LegendreBasis1D& by, double x,
                           double y);

}  // namespace effsens
