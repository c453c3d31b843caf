#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "effsens/interval.hpp"

namespace effsens {

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  Interval interval;

  std::size_t size() const { return nodes.size(); }
};

struct QuadratureRule2D {
  QuadratureRule1D x;
  QuadratureRule1D y;
};

struct QuadratureRule3D {
  QuadratureRule1D x;
  QuadratureRule1D y1;
  QuadratureRule1D y2;
};

/// Gauss-Legendre rule with `order` nodes mapped affinely onto the interval.
/// Exact for polynomials of degree <= 2*order - 1.
QuadratureRule1D gauss_rule(int order, const Interval& interval);

/// `panels` equal sub-intervals, each carrying a Gauss rule of `order` nodes.
QuadratureRule1D composite_gauss_rule(int order, int panels, const Interval& interval);

template <class F>
double integrate_1d(F&& f, const QuadratureRule1D& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

template <class F>
double integrate_2d(F&& f, const QuadratureRule2D& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < rule.y.size(); ++j)
      inner += rule.y.weights[j] * f(rule.x.nodes[i], rule.y.nodes[j]);
    sum += rule.x.weights[i] * inner;
  }
  return sum;
}

template <class F>
double integrate_3d(F&& f, const QuadratureRule3D& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    double mid = 0.0;
    for (std::size_t j = 0; j < rule.y1.size(); ++j) {
      double inner = 0.0;
      for (std::size_t k = 0; k < rule.y2.size(); ++k)
        inner += rule.y2.weights[k] * f(rule.x.nodes[i], rule.y1.nodes[j], rule.y2.nodes[k]);
      mid += rule.y1.weights[j] * inner;
    }
    sum += rule.x.weights[i] * mid;
  }
  return sum;
}

struct SimpsonResult {
  double value = 0.0;
  /// Some branch hit the recursion cap before meeting the tolerance; the
  /// value is still the best available estimate.
  bool depth_exhausted = false;
  std::size_t evaluations = 0;
};

inline constexpr int kSimpsonMaxDepth = 50;

/// Recursive adaptive Simpson. A panel is accepted when
/// |S_left + S_right - S_whole| <= 15 * tol_panel, with the tolerance halved
/// at each split; accepted panels return the Richardson-corrected value.
SimpsonResult adaptive_simpson(const std::function<double(double)>& f, const Interval& interval,
                               double tol, int max_depth = kSimpsonMaxDepth);

/// Vector-valued adaptive Simpson over [a, b] for N integrands sharing
/// evaluation points. Panel acceptance uses a per-component absolute
/// tolerance tol[c].
template <std::size_t N>
struct SimpsonVec {
  using Value = std::array<double, N>;

  static Value simpson(double a, double b, const Value& fa, const Value& fm, const Value& fb) {
    Value s;
    const double h6 = (b - a) / 6.0;
    for (std::size_t c = 0; c < N; ++c) s[c] = h6 * (fa[c] + 4.0 * fm[c] + fb[c]);
    return s;
  }

  template <class F>
  static Value refine(F& f, double a, double b, const Value& fa, const Value& fm, const Value& fb,
                      const Value& whole, const Value& tol, int depth, bool& exhausted,
                      std::size_t& evals) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Value flm = f(lm);
    const Value frm = f(rm);
    evals += 2;
    const Value left = simpson(a, m, fa, flm, fm);
    const Value right = simpson(m, b, fm, frm, fb);
    bool accept = true;
    Value out;
    for (std::size_t c = 0; c < N; ++c) {
      const double delta = left[c] + right[c] - whole[c];
      if (!(std::abs(delta) <= 15.0 * tol[c])) accept = false;
      out[c] = left[c] + right[c] + delta / 15.0;
    }
    if (accept) return out;
    if (depth <= 0) {
      exhausted = true;
      return out;
    }
    Value half_tol;
    for (std::size_t c = 0; c < N; ++c) half_tol[c] = 0.5 * tol[c];
    const Value l = refine(f, a, m, fa, flm, fm, left, half_tol, depth - 1, exhausted, evals);
    const Value r = refine(f, m, b, fm, frm, fb, right, half_tol, depth - 1, exhausted, evals);
    for (std::size_t c = 0; c < N; ++c) out[c] = l[c] + r[c];
    return out;
  }
};

}  // namespace effsens
