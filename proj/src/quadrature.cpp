#include "effsens/quadrature.hpp"

#include <numbers>
#include <sstream>

#include "effsens/error.hpp"

namespace effsens {

namespace {

// Nodes/weights on [-1, 1] by Newton iteration on P_order, symmetric pairs.
void gauss_legendre_reference(int order, std::vector<double>& x, std::vector<double>& w) {
  const int n = order;
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // one more pass to refresh dp at the converged node
        p0 = 1.0;
        p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        break;
      }
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

QuadratureRule1D gauss_rule(int order, const Interval& interval) {
  if (order < 1) {
    std::ostringstream os;
    os << "Gauss rule order must be >= 1 (got " << order << ")";
    throw ArgumentError(os.str());
  }
  std::vector<double> x, w;
  if (order == 1) {
    x = {0.0};
    w = {2.0};
  } else {
    gauss_legendre_reference(order, x, w);
  }
  const double half = 0.5 * interval.width();
  const double mid = interval.mid();
  QuadratureRule1D rule{{}, {}, interval};
  rule.nodes.resize(x.size());
  rule.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

QuadratureRule1D composite_gauss_rule(int order, int panels, const Interval& interval) {
  if (panels < 1) throw ArgumentError("composite rule needs at least one panel");
  QuadratureRule1D rule{{}, {}, interval};
  const double h = interval.width() / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = interval.lo() + p * h;
    const double hi = (p + 1 == panels) ? interval.hi() : interval.lo() + (p + 1) * h;
    const auto panel = gauss_rule(order, Interval(lo, hi));
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return rule;
}

namespace {

struct ScalarSimpson {
  const std::function<double(double)>& f;
  int max_depth;
  bool exhausted = false;
  std::size_t evals = 0;

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m));
    const double frm = f(0.5 * (m + b));
    evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      exhausted = true;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

SimpsonResult adaptive_simpson(const std::function<double(double)>& f, const Interval& interval,
                               double tol, int max_depth) {
  if (!(tol > 0.0)) throw ArgumentError("adaptive Simpson tolerance must be positive");
  const double a = interval.lo();
  const double b = interval.hi();
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  ScalarSimpson state{f, max_depth};
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = state.refine(a, b, fa, fm, fb, whole, tol, 0);
  return {value, state.exhausted, state.evals + 3};
}

}  // namespace effsens
