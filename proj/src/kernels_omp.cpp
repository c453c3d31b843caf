#include <sstream>

#include "effsens/error.hpp"
#include "effsens/kernels.hpp"

namespace effsens::kernels {

namespace omp {

void conditional_moments(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                         std::span<const double> xs, double tol,
                         std::span<ConditionalMoments> out) {
  if (out.size() != xs.size()) throw ArgumentError("moment output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  // Exceptions must not escape the parallel region; x values are checked
  // against the domain up front instead.
  for (double x : xs)
    if (!de.domain().x.contains(x)) {
      std::ostringstream os;
      os << "moment evaluation point x=" << x << " outside the density domain";
      throw ArgumentError(os.str());
    }
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t j = 0; j < n; ++j)
    out[j] = effsens::conditional_moments(de, phi, bounds, xs[j], tol);
}

void pair_vectors(SampleView main, std::span<const KernelSection> sections,
                  const QuadFuncContext& ctx, PairVectors& out) {
  detail::check_pair_inputs(main, sections, ctx, out);
  require_inside(main, ctx.domain);
  const auto n = static_cast<std::ptrdiff_t>(main.size());
#pragma omp parallel
  {
    std::vector<double> ax(ctx.bx.size()), ay(ctx.by.size()), r(ctx.by.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j)
      detail::pair_vectors_row(main, static_cast<std::size_t>(j), sections[j], ctx, ax, ay, r,
                               out);
  }
}

void gram(std::span<const double> rows, std::size_t n, std::size_t m, SquareMatrix& g) {
  const auto cols = detail::transpose(rows, n, m);
  g = SquareMatrix(m);
  const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t a = 0; a < mm; ++a)
    for (std::size_t b = static_cast<std::size_t>(a); b < m; ++b) {
      const double v = detail::gram_entry(cols, n, static_cast<std::size_t>(a), b);
      g(a, b) = v;
      g(b, a) = v;
    }
}

}  // namespace omp

}  // namespace effsens::kernels
