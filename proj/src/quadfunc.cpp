#include "effsens/quadfunc.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

#include "effsens/error.hpp"
#include "effsens/kernels.hpp"

namespace effsens {

SymmetricKernel SymmetricKernel::from_function(std::function<double(double, double, double)> eta,
                                               double sup_bound) {
  auto shared = std::make_shared<const std::function<double(double, double, double)>>(std::move(eta));
  return SymmetricKernel(
      [shared](double x) -> KernelSection {
        return [shared, x](double y1, double y2) { return (*shared)(x, y1, y2); };
      },
      sup_bound);
}

QuadFuncContext QuadFuncContext::make(const Domain& domain, const BasisIndexSet& index_set,
                                      int quadrature_order) {
  if (quadrature_order < index_set.k_x() || quadrature_order < index_set.k_y()) {
    std::ostringstream os;
    os << "quadrature order " << quadrature_order << " is below the basis size";
    throw ConfigError(os.str());
  }
  QuadFuncContext ctx{domain,
                      LegendreBasis1D(domain.x, index_set.k_x() - 1),
                      LegendreBasis1D(domain.y, index_set.k_y() - 1),
                      index_set,
                      gauss_rule(quadrature_order, domain.x),
                      gauss_rule(quadrature_order, domain.y),
                      {},
                      {}};
  const int kx = index_set.k_x();
  const int ky = index_set.k_y();
  std::vector<double> buf(std::max(kx, ky));
  ctx.x_table.resize(ctx.x_rule.size() * kx);
  for (std::size_t g = 0; g < ctx.x_rule.size(); ++g) {
    ctx.bx.eval_all(ctx.x_rule.nodes[g], buf);
    std::copy_n(buf.begin(), kx, ctx.x_table.begin() + g * kx);
  }
  ctx.y_table.resize(ctx.y_rule.size() * ky);
  for (std::size_t g = 0; g < ctx.y_rule.size(); ++g) {
    ctx.by.eval_all(ctx.y_rule.nodes[g], buf);
    for (int k = 0; k < ky; ++k) ctx.y_table[g * ky + k] = ctx.y_rule.weights[g] * buf[k];
  }
  return ctx;
}

namespace {

// eta on the (y1, y2) grid for one x node, row-major G x G.
void kernel_plane(const KernelSection& section, const QuadratureRule1D& yr,
                  std::vector<double>& plane) {
  const std::size_t g = yr.size();
  plane.resize(g * g);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) plane[a * g + b] = section(yr.nodes[a], yr.nodes[b]);
}

// Adds w_x * alpha(x) alpha(x)' (x) [Bw' E Bw] into C, where Bw holds
// weighted beta values; upper triangle only.
void accumulate_c(const QuadFuncContext& ctx, std::size_t xg, const std::vector<double>& plane,
                  SquareMatrix& c, std::vector<double>& tmp, std::vector<double>& inner) {
  const int kx = ctx.index_set.k_x();
  const int ky = ctx.index_set.k_y();
  const std::size_t g = ctx.y_rule.size();
  const double* yt = ctx.y_table.data();
  tmp.assign(g * ky, 0.0);  // tmp[y1][iy'] = sum_y2 E[y1][y2] * wbeta_iy'(y2)
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) {
      const double e = plane[a * g + b];
      for (int k = 0; k < ky; ++k) tmp[a * ky + k] += e * yt[b * ky + k];
    }
  inner.assign(static_cast<std::size_t>(ky) * ky, 0.0);
  for (std::size_t a = 0; a < g; ++a)
    for (int k = 0; k < ky; ++k) {
      const double wb = yt[a * ky + k];
      for (int l = 0; l < ky; ++l) inner[k * ky + l] += wb * tmp[a * ky + l];
    }
  const double wx = ctx.x_rule.weights[xg];
  const double* ax = ctx.x_table.data() + xg * kx;
  const std::size_t m = ctx.m();
  for (std::size_t i = 0; i < m; ++i) {
    const auto pi = ctx.index_set.pairs()[i];
    for (std::size_t j = i; j < m; ++j) {
      const auto pj = ctx.index_set.pairs()[j];
      c(i, j) += wx * ax[pi.ix] * ax[pj.ix] * inner[pi.iy * ky + pj.iy];
    }
  }
}

void mirror_upper(SquareMatrix& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> mat_vec(const SquareMatrix& c, std::span<const double> v) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double frobenius(const SquareMatrix& a, const SquareMatrix& b) {
  return dot(a.data(), b.data());
}

std::vector<double> column_sums(std::span<const double> rows, std::size_t n, std::size_t m) {
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) out[i] += rows[j * m + i];
  return out;
}

void require_pairs(const PairVectors& pv, std::size_t m) {
  if (pv.n < 3) {
    std::ostringstream os;
    os << "crossed quadratic estimator needs at least 3 main-sample points (got " << pv.n << ")";
    throw ConfigError(os.str());
  }
  if (pv.m != m) throw ArgumentError("pair vectors and coefficient matrix disagree on |M|");
}

}  // namespace

SquareMatrix crossed_coefficients(const SymmetricKernel& eta, const QuadFuncContext& ctx) {
  SquareMatrix c(ctx.m());
  std::vector<double> plane, tmp, inner;
  for (std::size_t xg = 0; xg < ctx.x_rule.size(); ++xg) {
    kernel_plane(eta.section(ctx.x_rule.nodes[xg]), ctx.y_rule, plane);
    accumulate_c(ctx, xg, plane, c, tmp, inner);
  }
  mirror_upper(c);
  return c;
}

CoefficientVectors coefficient_vectors(const SymmetricKernel& eta, const QuadFuncContext& ctx,
                                       const BivariateFn& f) {
  const std::size_t m = ctx.m();
  const int kx = ctx.index_set.k_x();
  const int ky = ctx.index_set.k_y();
  const std::size_t gy = ctx.y_rule.size();
  CoefficientVectors out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                         SquareMatrix(m)};
  std::vector<double> plane, tmp, inner, fy(gy), gvals(gy), proj_f(ky), proj_g(ky);
  for (std::size_t xg = 0; xg < ctx.x_rule.size(); ++xg) {
    const double x = ctx.x_rule.nodes[xg];
    kernel_plane(eta.section(x), ctx.y_rule, plane);
    accumulate_c(ctx, xg, plane, out.c, tmp, inner);
    for (std::size_t a = 0; a < gy; ++a) fy[a] = f(x, ctx.y_rule.nodes[a]);
    // g(x, y_a) = sum_u w_u f(x, u) eta(x, y_a, u)
    for (std::size_t a = 0; a < gy; ++a) {
      double s = 0.0;
      for (std::size_t u = 0; u < gy; ++u) s += ctx.y_rule.weights[u] * fy[u] * plane[a * gy + u];
      gvals[a] = s;
    }
    std::fill(proj_f.begin(), proj_f.end(), 0.0);
    std::fill(proj_g.begin(), proj_g.end(), 0.0);
    for (std::size_t a = 0; a < gy; ++a)
      for (int k = 0; k < ky; ++k) {
        proj_f[k] += ctx.y_table[a * ky + k] * fy[a];
        proj_g[k] += ctx.y_table[a * ky + k] * gvals[a];
      }
    const double wx = ctx.x_rule.weights[xg];
    const double* ax = ctx.x_table.data() + xg * kx;
    for (int ix = 0; ix < kx; ++ix)
      for (int iy = 0; iy < ky; ++iy) {
        const std::size_t i = ctx.index_set.position(ix, iy);
        out.a[i] += wx * ax[ix] * proj_f[iy];
        out.b[i] += wx * ax[ix] * proj_g[iy];
      }
  }
  mirror_upper(out.c);
  return out;
}

void require_inside(SampleView sample, const Domain& domain) {
  for (std::size_t j = 0; j < sample.size(); ++j) {
    if (!domain.contains(sample.x(j), sample.y(j))) {
      std::ostringstream os;
      os << "sample point " << j << " (" << sample.x(j) << ", " << sample.y(j)
         << ") lies outside the domain [" << domain.x.lo() << ", " << domain.x.hi() << "] x ["
         << domain.y.lo() << ", " << domain.y.hi() << "]";
      throw ArgumentError(os.str());
    }
  }
}

ThetaEstimate theta_from_pairs(const PairVectors& pv, const SquareMatrix& c) {
  require_pairs(pv, c.size());
  const double n = static_cast<double>(pv.n);
  const double pairs = n * (n - 1.0);
  const auto sum_s = column_sums(pv.s, pv.n, pv.m);
  const auto sum_t = column_sums(pv.t, pv.n, pv.m);
  double diag_st = 0.0;
  for (std::size_t j = 0; j < pv.n; ++j) diag_st += dot(pv.s_row(j), pv.t_row(j));
  SquareMatrix gram;
  kernels::omp::gram(pv.s, pv.n, pv.m, gram);

  ThetaEstimate out;
  out.term_linear_pair = 2.0 * (dot(sum_s, sum_t) - diag_st) / pairs;
  out.term_bilinear = (dot(sum_s, mat_vec(c, sum_s)) - frobenius(c, gram)) / pairs;
  out.value = out.term_linear_pair - out.term_bilinear;
  return out;
}

HoeffdingTerms hoeffding_from_pairs(const PairVectors& pv, const CoefficientVectors& coeffs) {
  require_pairs(pv, coeffs.c.size());
  const std::size_t m = pv.m;
  const double n = static_cast<double>(pv.n);
  const auto& a = coeffs.a;
  const auto& b = coeffs.b;
  const auto& c = coeffs.c;

  std::vector<double> q(pv.s.size()), r(pv.t.size());
  for (std::size_t j = 0; j < pv.n; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      q[j * m + i] = pv.s[j * m + i] - a[i];
      r[j * m + i] = pv.t[j * m + i] - b[i];
    }
  const auto sum_q = column_sums(q, pv.n, m);
  const auto sum_r = column_sums(r, pv.n, m);
  double diag_qr = 0.0;
  for (std::size_t j = 0; j < pv.n; ++j)
    diag_qr += dot(std::span<const double>(q.data() + j * m, m),
                   std::span<const double>(r.data() + j * m, m));
  SquareMatrix gram_q;
  kernels::omp::gram(q, pv.n, m, gram_q);

  HoeffdingTerms out;
  const double pairs = n * (n - 1.0);
  out.u_k = (2.0 * (dot(sum_q, sum_r) - diag_qr) -
             (dot(sum_q, mat_vec(c, sum_q)) - frobenius(c, gram_q))) /
            pairs;
  const auto ca = mat_vec(c, a);
  out.p_l = (2.0 * dot(a, sum_r) + 2.0 * dot(b, sum_q) - 2.0 * dot(ca, sum_q)) / n;
  out.headline = 2.0 * dot(a, b) - dot(a, ca);
  return out;
}

namespace {

PairVectors pairs_for(SampleView main, const SymmetricKernel& eta, const QuadFuncContext& ctx) {
  require_inside(main, ctx.domain);
  std::vector<KernelSection> sections;
  sections.reserve(main.size());
  for (std::size_t j = 0; j < main.size(); ++j) sections.push_back(eta.section(main.x(j)));
  PairVectors pv;
  kernels::omp::pair_vectors(main, sections, ctx, pv);
  return pv;
}

}  // namespace

ThetaEstimate estimate_theta(SampleView main, const SymmetricKernel& eta,
                             const QuadFuncContext& ctx) {
  if (main.size() < 3) {
    std::ostringstream os;
    os << "crossed quadratic estimator needs at least 3 main-sample points (got " << main.size()
       << ")";
    throw ConfigError(os.str());
  }
  const PairVectors pv = pairs_for(main, eta, ctx);
  return theta_from_pairs(pv, crossed_coefficients(eta, ctx));
}

HoeffdingTerms hoeffding_decompose(SampleView main, const SymmetricKernel& eta,
                                   const QuadFuncContext& ctx, const BivariateFn& f) {
  if (main.size() < 3) throw ConfigError("Hoeffding decomposition needs at least 3 points");
  const PairVectors pv = pairs_for(main, eta, ctx);
  return hoeffding_from_pairs(pv, coefficient_vectors(eta, ctx, f));
}

namespace {

// f on the (x_rule, y_rule) grid via a callback fx(x_index, y_values_out).
template <class FillRow>
double lambda_on_grid(FillRow&& fill_row, const SymmetricKernel& eta,
                      const QuadFuncContext& ctx) {
  const auto& xr = ctx.x_rule;
  const auto& yr = ctx.y_rule;
  const std::size_t gy = yr.size();
  std::vector<double> fy(gy), plane;
  double int_g2f = 0.0;
  double int_gf = 0.0;
  for (std::size_t xg = 0; xg < xr.size(); ++xg) {
    fill_row(xr.nodes[xg], fy);
    kernel_plane(eta.section(xr.nodes[xg]), yr, plane);
    double row_g2f = 0.0;
    double row_gf = 0.0;
    for (std::size_t a = 0; a < gy; ++a) {
      double g = 0.0;
      for (std::size_t u = 0; u < gy; ++u) g += yr.weights[u] * fy[u] * plane[a * gy + u];
      row_g2f += yr.weights[a] * g * g * fy[a];
      row_gf += yr.weights[a] * g * fy[a];
    }
    int_g2f += xr.weights[xg] * row_g2f;
    int_gf += xr.weights[xg] * row_gf;
  }
  return std::max(0.0, 4.0 * (int_g2f - int_gf * int_gf));
}

}  // namespace

double lambda_plugin(const BivariateFn& f, const SymmetricKernel& eta, const QuadFuncContext& ctx) {
  return lambda_on_grid(
      [&](double x, std::vector<double>& fy) {
        for (std::size_t a = 0; a < fy.size(); ++a) fy[a] = f(x, ctx.y_rule.nodes[a]);
      },
      eta, ctx);
}

double lambda_plugin(const DensityEstimate& de, const SymmetricKernel& eta,
                     const QuadFuncContext& ctx) {
  return lambda_on_grid(
      [&](double x, std::vector<double>& fy) {
        const DensitySlice s = de.slice(x);
        for (std::size_t a = 0; a < fy.size(); ++a) fy[a] = s(ctx.y_rule.nodes[a]);
      },
      eta, ctx);
}

}  // namespace effsens
