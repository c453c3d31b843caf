#include "effsens/orthobasis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "effsens/error.hpp"

namespace effsens {

LegendreBasis1D::LegendreBasis1D(Interval interval, int max_degree)
    : interval_(interval), max_degree_(max_degree) {
  if (max_degree < 0) throw ArgumentError("Legendre basis degree must be non-negative");
  norms_.resize(size());
  for (int k = 0; k <= max_degree_; ++k)
    norms_[k] = std::sqrt((2.0 * k + 1.0) / interval_.width());
}

void LegendreBasis1D::check_point(double x) const {
  if (!interval_.contains(x)) {
    std::ostringstream os;
    os << "Legendre evaluation point " << x << " outside [" << interval_.lo() << ", "
       << interval_.hi() << "]";
    throw ArgumentError(os.str());
  }
}

double LegendreBasis1D::eval(int degree, double x) const {
  if (degree < 0 || degree > max_degree_) {
    std::ostringstream os;
    os << "Legendre degree " << degree << " outside [0, " << max_degree_ << "]";
    throw ArgumentError(os.str());
  }
  check_point(x);
  const double t = (2.0 * x - interval_.lo() - interval_.hi()) / interval_.width();
  double p_prev = 0.0;
  double p = 1.0;
  for (int k = 0; k < degree; ++k) {
    const double next = ((2.0 * k + 1.0) * t * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  return norms_[degree] * p;
}

void LegendreBasis1D::eval_all(double x, std::span<double> out) const {
  if (out.size() < size()) throw ArgumentError("eval_all output span too small");
  check_point(x);
  const double t = (2.0 * x - interval_.lo() - interval_.hi()) / interval_.width();
  double p_prev = 0.0;
  double p = 1.0;
  out[0] = norms_[0];
  for (int k = 0; k < max_degree_; ++k) {
    const double next = ((2.0 * k + 1.0) * t * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
    out[k + 1] = norms_[k + 1] * p;
  }
}

BasisIndexSet::BasisIndexSet(int k_x, int k_y) : k_x_(k_x), k_y_(k_y) {
  pairs_.reserve(static_cast<std::size_t>(k_x) * k_y);
  for (int ix = 0; ix < k_x; ++ix)
    for (int iy = 0; iy < k_y; ++iy) pairs_.push_back({ix, iy});
}

BasisIndexSet BasisIndexSet::rectangular(int k_x, int k_y) {
  if (k_x < 1 || k_y < 1) throw ArgumentError("index set dimensions must be positive");
  return BasisIndexSet(k_x, k_y);
}

BasisIndexSet build_index_set(std::size_t n2, std::optional<int> k_override) {
  if (n2 < 4) {
    std::ostringstream os;
    os << "index set needs n2 >= 4 (got " << n2 << ")";
    throw ArgumentError(os.str());
  }
  int k = 0;
  if (k_override) {
    if (*k_override < 1) throw ArgumentError("basis size override must be positive");
    k = *k_override;
  } else {
    k = static_cast<int>(std::lround(std::pow(static_cast<double>(n2), 0.25)));
  }
  return BasisIndexSet::rectangular(k, k);
}

double tensor_eval(const LegendreBasis1D& bx, const LegendreBasis1D& by, TensorIndex index,
                   double x, double y) {
  return bx.eval(index.ix, x) * by.eval(index.iy, y);
}

namespace {

void check_basis_covers(const BasisIndexSet& index_set, const LegendreBasis1D& bx,
                        const LegendreBasis1D& by) {
  if (index_set.k_x() > static_cast<int>(bx.size()) ||
      index_set.k_y() > static_cast<int>(by.size()))
    throw ArgumentError("index set exceeds basis degree");
}

}  // namespace

std::vector<double> project_coefficients(const BivariateFn& target, const BasisIndexSet& index_set,
                                         const LegendreBasis1D& bx, const LegendreBasis1D& by,
                                         const QuadratureRule2D& rule) {
  check_basis_covers(index_set, bx, by);
  const int kx = index_set.k_x();
  const int ky = index_set.k_y();
  std::vector<double> ax(bx.size()), by_vals(by.size());
  // Per-axis basis tables: tx[i][ix] = w_i * alpha_ix(x_i).
  std::vector<double> tx(rule.x.size() * kx), ty(rule.y.size() * ky);
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    bx.eval_all(rule.x.nodes[i], ax);
    for (int k = 0; k < kx; ++k) tx[i * kx + k] = rule.x.weights[i] * ax[k];
  }
  for (std::size_t j = 0; j < rule.y.size(); ++j) {
    by.eval_all(rule.y.nodes[j], by_vals);
    for (int k = 0; k < ky; ++k) ty[j * ky + k] = rule.y.weights[j] * by_vals[k];
  }
  std::vector<double> coeffs(index_set.size(), 0.0);
  std::vector<double> inner(ky);
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    std::fill(inner.begin(), inner.end(), 0.0);
    for (std::size_t j = 0; j < rule.y.size(); ++j) {
      const double v = target(rule.x.nodes[i], rule.y.nodes[j]);
      for (int k = 0; k < ky; ++k) inner[k] += ty[j * ky + k] * v;
    }
    for (int ix = 0; ix < kx; ++ix)
      for (int iy = 0; iy < ky; ++iy)
        coeffs[index_set.position(ix, iy)] += tx[i * kx + ix] * inner[iy];
  }
  return coeffs;
}

double evaluate_projection(std::span<const double> coeffs, const BasisIndexSet& index_set,
                           const LegendreBasis1D& bx, const LegendreBasis1D& by, double x,
                           double y) {
  if (coeffs.size() != index_set.size()) {
    std::ostringstream os;
    os << "coefficient count " << coeffs.size() << " does not match index set size "
       << index_set.size();
    throw ArgumentError(os.str());
  }
  check_basis_covers(index_set, bx, by);
  std::vector<double> ax(bx.size()), ay(by.size());
  bx.eval_all(x, ax);
  by.eval_all(y, ay);
  double sum = 0.0;
  for (std::size_t i = 0; i < index_set.size(); ++i) {
    const auto& p = index_set.pairs()[i];
    sum += coeffs[i] * ax[p.ix] * ay[p.iy];
  }
  return sum;
}

}  // namespace effsens
