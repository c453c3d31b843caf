#include <algorithm>
#include <sstream>

#include "effsens/error.hpp"
#include "effsens/kernels.hpp"

namespace effsens::kernels {

namespace detail {

void pair_vectors_row(SampleView main, std::size_t j, const KernelSection& section,
                      const QuadFuncContext& ctx, std::span<double> ax, std::span<double> ay,
                      std::span<double> r, PairVectors& out) {
  const int kx = ctx.index_set.k_x();
  const int ky = ctx.index_set.k_y();
  const double xj = main.x(j);
  const double yj = main.y(j);
  ctx.bx.eval_all(xj, ax);
  ctx.by.eval_all(yj, ay);
  std::fill(r.begin(), r.end(), 0.0);
  const auto& u = ctx.y_rule.nodes;
  for (std::size_t g = 0; g < u.size(); ++g) {
    const double e = section(u[g], yj);
    const double* row = ctx.y_table.data() + g * ky;
    for (int k = 0; k < ky; ++k) r[k] += row[k] * e;
  }
  double* s = out.s.data() + j * out.m;
  double* t = out.t.data() + j * out.m;
  for (int ix = 0; ix < kx; ++ix) {
    for (int iy = 0; iy < ky; ++iy) {
      const std::size_t i = ctx.index_set.position(ix, iy);
      s[i] = ax[ix] * ay[iy];
      t[i] = ax[ix] * r[iy];
    }
  }
}

std::vector<double> transpose(std::span<const double> rows, std::size_t n, std::size_t m) {
  std::vector<double> cols(n * m);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cols[i * n + j] = rows[j * m + i];
  return cols;
}

double gram_entry(std::span<const double> cols, std::size_t n, std::size_t a, std::size_t b) {
  const double* ca = cols.data() + a * n;
  const double* cb = cols.data() + b * n;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += ca[j] * cb[j];
  return sum;
}

void check_pair_inputs(SampleView main, std::span<const KernelSection> sections,
                       const QuadFuncContext& ctx, PairVectors& out) {
  if (sections.size() != main.size()) {
    std::ostringstream os;
    os << "kernel section count " << sections.size() << " does not match sample size "
       << main.size();
    throw ArgumentError(os.str());
  }
  out.n = main.size();
  out.m = ctx.m();
  out.s.assign(out.n * out.m, 0.0);
  out.t.assign(out.n * out.m, 0.0);
}

}  // namespace detail

namespace serial {

void conditional_moments(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                         std::span<const double> xs, double tol,
                         std::span<ConditionalMoments> out) {
  if (out.size() != xs.size()) throw ArgumentError("moment output size mismatch");
  for (std::size_t j = 0; j < xs.size(); ++j)
    out[j] = effsens::conditional_moments(de, phi, bounds, xs[j], tol);
}

void pair_vectors(SampleView main, std::span<const KernelSection> sections,
                  const QuadFuncContext& ctx, PairVectors& out) {
  detail::check_pair_inputs(main, sections, ctx, out);
  require_inside(main, ctx.domain);
  std::vector<double> ax(ctx.bx.size()), ay(ctx.by.size()), r(ctx.by.size());
  for (std::size_t j = 0; j < main.size(); ++j)
    detail::pair_vectors_row(main, j, sections[j], ctx, ax, ay, r, out);
}

void gram(std::span<const double> rows, std::size_t n, std::size_t m, SquareMatrix& g) {
  const auto cols = detail::transpose(rows, n, m);
  g = SquareMatrix(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      const double v = detail::gram_entry(cols, n, a, b);
      g(a, b) = v;
      g(b, a) = v;
    }
}

}  // namespace serial

}  // namespace effsens::kernels
