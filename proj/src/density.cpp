#include "effsens/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "effsens/error.hpp"

namespace effsens {

namespace {

inline double epanechnikov(double u) {
  const double a = 1.0 - u * u;
  return a > 0.0 ? 0.75 * a : 0.0;
}

// Integral of the unit Epanechnikov kernel over (-inf, u].
inline double epanechnikov_cdf(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 0.5 + 0.75 * (u - u * u * u / 3.0);
}

// Mass of a bump of half-width h centered at c that falls inside iv.
inline double mass_inside(double c, double h, const Interval& iv) {
  return epanechnikov_cdf((iv.hi() - c) / h) - epanechnikov_cdf((iv.lo() - c) / h);
}

Interval padded_axis(std::span<const double> v, double pad) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double range = *mx - *mn;
  if (range > 0.0) return {*mn - pad * range, *mx + pad * range};
  const double p = std::max(std::abs(*mn), 1.0) * std::max(pad, kDegeneratePad);
  return {*mn - p, *mx + p};
}

void append_images(double v, double h, const Interval& iv, std::vector<double>& out) {
  out.clear();
  out.push_back(v);
  if (v - iv.lo() < h) out.push_back(2.0 * iv.lo() - v);
  if (iv.hi() - v < h) out.push_back(2.0 * iv.hi() - v);
}

}  // namespace

Domain infer_domain(SampleView sample, double pad_fraction) {
  if (sample.empty()) throw ArgumentError("cannot infer a domain from an empty sample");
  if (!(pad_fraction >= 0.0)) throw ArgumentError("pad fraction must be non-negative");
  return {padded_axis(sample.x(), pad_fraction), padded_axis(sample.y(), pad_fraction)};
}

double silverman_bandwidth(std::span<const double> values, double axis_width) {
  const double cap = 0.25 * axis_width;
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return cap;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double h = 1.06 * sd * std::pow(n, -0.2);
  return (h > 0.0) ? std::min(h, cap) : cap;
}

double DensitySlice::raw(double y) const {
  const auto first = std::lower_bound(centers_.begin(), centers_.end(), y - hy_);
  double sum = 0.0;
  for (auto it = first; it != centers_.end() && *it < y + hy_; ++it) {
    const auto k = static_cast<std::size_t>(it - centers_.begin());
    sum += weights_[k] * epanechnikov((y - *it) * inv_hy_);
  }
  return sum;
}

double DensitySlice::operator()(double y) const {
  if (!y_.contains(y)) return 0.0;
  return scale_ * std::max(raw(y), floor0_);
}

std::array<double, 3> DensitySlice::integrals(const ScalarFn& phi, double tol,
                                              bool* depth_exhausted) const {
  using Vec = SimpsonVec<3>;
  const double c = y_.lo();
  const double d = y_.hi();

  std::vector<double> cuts;
  cuts.reserve(2 * centers_.size() + 2);
  cuts.push_back(c);
  cuts.push_back(d);
  for (double t : centers_) {
    if (t - hy_ > c && t - hy_ < d) cuts.push_back(t - hy_);
    if (t + hy_ > c && t + hy_ < d) cuts.push_back(t + hy_);
  }
  std::sort(cuts.begin(), cuts.end());
  const double min_piece = 1e-13 * y_.width();
  std::vector<double> knots;
  knots.reserve(cuts.size());
  for (double t : cuts)
    if (knots.empty() || t - knots.back() > min_piece) knots.push_back(t);
  if (knots.back() != d) knots.back() = d;

  // Inside a piece the active bumps are fixed, so the raw sum is the
  // quadratic 0.75 * (S0 - (S0 t^2 - 2 t S1 + S2) / h^2), t = y - ref, with
  // S_k the k-th moments of the active (shifted) centers. The active range
  // only moves forward; sums are rebuilt every kRebuild updates to bound
  // rounding drift.
  const std::size_t pieces = knots.size() - 1;
  const double ref = y_.mid();
  const double inv_h2 = inv_hy_ * inv_hy_;
  struct Moments {
    double s0, s1, s2;
  };
  std::vector<Moments> moments(pieces);
  {
    constexpr int kRebuild = 64;
    std::size_t lo = 0, hi = 0;
    Moments m{0.0, 0.0, 0.0};
    int updates = 0;
    auto add = [&](std::size_t k, double sign) {
      const double u = centers_[k] - ref;
      const double w = sign * weights_[k];
      m.s0 += w;
      m.s1 += w * u;
      m.s2 += w * u * u;
      ++updates;
    };
    for (std::size_t p = 0; p < pieces; ++p) {
      const double mid = 0.5 * (knots[p] + knots[p + 1]);
      while (hi < centers_.size() && centers_[hi] - hy_ < mid) add(hi++, 1.0);
      while (lo < hi && centers_[lo] + hy_ <= mid) add(lo++, -1.0);
      if (updates > kRebuild) {
        m = {0.0, 0.0, 0.0};
        for (std::size_t k = lo; k < hi; ++k) add(k, 1.0);
        updates = 0;
      }
      moments[p] = m;
    }
  }

  auto eval_in = [&](const Moments& m, double y) -> Vec::Value {
    const double t = y - ref;
    const double q = 0.75 * (m.s0 - (m.s0 * t * t - 2.0 * t * m.s1 + m.s2) * inv_h2);
    const double v = scale_ * std::max(q, floor0_);
    const double p = phi(y);
    return {v, p * v, p * p * v};
  };

  std::vector<Vec::Value> f_lo(pieces), f_mid(pieces), f_hi(pieces), whole(pieces);
  Vec::Value total{0.0, 0.0, 0.0};
  for (std::size_t p = 0; p < pieces; ++p) {
    const double a = knots[p];
    const double b = knots[p + 1];
    f_lo[p] = eval_in(moments[p], a);
    f_mid[p] = eval_in(moments[p], 0.5 * (a + b));
    f_hi[p] = eval_in(moments[p], b);
    whole[p] = Vec::simpson(a, b, f_lo[p], f_mid[p], f_hi[p]);
    for (std::size_t k = 0; k < 3; ++k) total[k] += whole[p][k];
  }

  Vec::Value out{0.0, 0.0, 0.0};
  bool exhausted = false;
  std::size_t evals = 0;
  const double width = d - c;
  for (std::size_t p = 0; p < pieces; ++p) {
    const double a = knots[p];
    const double b = knots[p + 1];
    const double share = tol * (b - a) / width;
    Vec::Value piece_tol;
    for (std::size_t k = 0; k < 3; ++k) piece_tol[k] = share * std::abs(total[k]);
    const Moments& m = moments[p];
    auto f = [&](double y) { return eval_in(m, y); };
    const Vec::Value v = Vec::refine(f, a, b, f_lo[p], f_mid[p], f_hi[p], whole[p], piece_tol,
                                     kSimpsonMaxDepth, exhausted, evals);
    for (std::size_t k = 0; k < 3; ++k) out[k] += v[k];
  }
  if (depth_exhausted) *depth_exhausted = exhausted;
  return out;
}

DensitySlice DensityEstimate::make_slice(double x, double scale) const {
  DensitySlice s(x, domain_.y, support_.y, scale, floor0_);
  const double hx = support_.x;
  const double inv_hx = 1.0 / hx;
  auto first = std::lower_bound(images_.begin(), images_.end(), x - hx,
                                [](const Image& im, double v) { return im.x < v; });
  std::vector<std::pair<double, double>> bumps;
  for (auto it = first; it != images_.end() && it->x < x + hx; ++it) {
    const double w = epanechnikov((x - it->x) * inv_hx);
    if (w > 0.0) bumps.emplace_back(it->y, norm_ * w);
  }
  std::sort(bumps.begin(), bumps.end());
  s.centers_.reserve(bumps.size());
  s.weights_.reserve(bumps.size());
  for (const auto& [c, w] : bumps) {
    s.centers_.push_back(c);
    s.weights_.push_back(w);
  }
  return s;
}

double DensityEstimate::marginal_floor() const {
  return std::max(floor() * domain_.y.width(), kMarginalFloor / domain_.x.width());
}

DensitySlice DensityEstimate::slice(double x) const {
  if (!domain_.x.contains(x)) {
    std::ostringstream os;
    os << "density slice at x=" << x << " outside [" << domain_.x.lo() << ", " << domain_.x.hi()
       << "]";
    throw ArgumentError(os.str());
  }
  return make_slice(x, scale_);
}

double DensityEstimate::operator()(double x, double y) const {
  if (!domain_.contains(x, y)) return 0.0;
  return make_slice(x, scale_)(y);
}

DensityEstimate fit_kde(SampleView prelim, const Domain& domain,
                        std::optional<Bandwidths> bandwidths) {
  const std::size_t n = prelim.size();
  if (n < 10) {
    std::ostringstream os;
    os << "kernel density needs at least 10 preliminary points (got " << n << ")";
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!domain.contains(prelim.x(i), prelim.y(i))) {
      std::ostringstream os;
      os << "preliminary point " << i << " (" << prelim.x(i) << ", " << prelim.y(i)
         << ") outside the domain";
      throw ArgumentError(os.str());
    }
  }

  Bandwidths bw{};
  if (bandwidths) {
    bw = *bandwidths;
    if (!(bw.x > 0.0) || !(bw.y > 0.0)) throw ConfigError("bandwidths must be positive");
    if (kKernelRadius * bw.x > domain.x.width() || kKernelRadius * bw.y > domain.y.width())
      throw ConfigError("kernel support (sqrt(5) * bandwidth) exceeds the domain width");
  } else {
    bw = {silverman_bandwidth(prelim.x(), domain.x.width()),
          silverman_bandwidth(prelim.y(), domain.y.width())};
  }

  DensityEstimate de(domain, bw, n);
  const Bandwidths sup{kKernelRadius * bw.x, kKernelRadius * bw.y};
  de.support_ = sup;
  std::vector<double> xi, yi;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    append_images(prelim.x(i), sup.x, domain.x, xi);
    append_images(prelim.y(i), sup.y, domain.y, yi);
    for (double ix : xi) {
      const double mx = mass_inside(ix, sup.x, domain.x);
      for (double iy : yi) {
        const double my = mass_inside(iy, sup.y, domain.y);
        if (mx > 0.0 && my > 0.0) {
          de.images_.push_back({ix, iy});
          mass += mx * my;
        }
      }
    }
  }
  std::sort(de.images_.begin(), de.images_.end(),
            [](const auto& a, const auto& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  mass /= static_cast<double>(n);
  de.norm_ = 1.0 / (static_cast<double>(n) * sup.x * sup.y * mass);
  de.floor0_ = kFloorMass / domain.area();

  // Mass added by the floor, on a composite Gauss grid.
  const auto gx = composite_gauss_rule(3, 64, domain.x);
  const auto gy = composite_gauss_rule(3, 64, domain.y);
  double excess = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const DensitySlice s = de.make_slice(gx.nodes[i], 1.0);
    double inner = 0.0;
    for (std::size_t j = 0; j < gy.size(); ++j)
      inner += gy.weights[j] * std::max(0.0, de.floor0_ - s.raw(gy.nodes[j]));
    excess += gx.weights[i] * inner;
  }
  de.scale_ = 1.0 / (1.0 + excess);
  return de;
}

ConditionalMoments conditional_moments(const DensityEstimate& de, const ScalarFn& phi,
                                       PhiBounds bounds, double x, double tol) {
  const DensitySlice s = de.slice(x);
  bool exhausted = false;
  const auto in = s.integrals(phi, tol, &exhausted);
  ConditionalMoments out{};
  out.depth_exhausted = exhausted;
  out.marginal = std::max(in[0], de.marginal_floor());
  out.mean = std::clamp(in[1] / in[0], bounds.lo, bounds.hi);
  const double sq_lo = (bounds.lo <= 0.0 && bounds.hi >= 0.0)
                           ? 0.0
                           : std::min(bounds.lo * bounds.lo, bounds.hi * bounds.hi);
  const double sq_hi = std::max(bounds.lo * bounds.lo, bounds.hi * bounds.hi);
  out.second = std::max(std::clamp(in[2] / in[0], sq_lo, sq_hi), out.mean * out.mean);
  return out;
}

double marginal_x(const DensityEstimate& de, double x, double tol) {
  const DensitySlice s = de.slice(x);
  const auto in = s.integrals([](double) { return 0.0; }, tol, nullptr);
  return std::max(in[0], de.marginal_floor());
}

double conditional_mean(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                        double x, double tol) {
  return conditional_moments(de, phi, bounds, x, tol).mean;
}

double conditional_second_moment(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                                 double x, double tol) {
  return conditional_moments(de, phi, bounds, x, tol).second;
}

}  // namespace effsens
