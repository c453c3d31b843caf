#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <functional>
#include <optional>
#include <vector>

#include "effsens/interval.hpp"
#include "effsens/quadrature.hpp"
#include "effsens/sample.hpp"

namespace effsens {

struct Bandwidths {
  double x;
  double y;
};

/// Bounds [chi1, chi2] known to contain phi(y) for every y in the domain.
struct PhiBounds {
  double lo;
  double hi;
};

using ScalarFn = std::function<double(double)>;

inline constexpr double kDefaultSimpsonTol = 1e-8;
inline constexpr double kFloorMass = 1e-6;  // floor = kFloorMass / area

/// Lower clamp of the x-marginal, as a fraction of the uniform level
/// 1/width. A preliminary sample that leaves a strip of the domain uncovered
/// would otherwise put only the joint floor under the K-kernel denominator.
inline constexpr double kMarginalFloor = 1e-2;

/// Bandwidths are scale parameters of the unit-variance Epanechnikov kernel
/// 3/(4 sqrt 5) (1 - t^2/5) on |t| < sqrt 5, the form the Silverman rule is
/// calibrated for. A bump of bandwidth h reaches kKernelRadius * h.
inline constexpr double kKernelRadius = 2.2360679774997897;

/// Per-axis [min - pad*range, max + pad*range]. An axis with zero range is
/// padded by max(|value|, 1) * max(pad, kDegeneratePad) so it stays a valid
/// interval even when pad is 0.
inline constexpr double kDegeneratePad = 0.05;
Domain infer_domain(SampleView sample, double pad_fraction);

/// f-hat restricted to a fixed x: a sum of Epanechnikov bumps in y, floored
/// and rescaled exactly as the bivariate estimate.
class DensitySlice {
 public:
  double x() const { return x_; }
  double operator()(double y) const;
  /// Unclamped, unscaled kernel sum at y.
  double raw(double y) const;

  /// Integrals over the y-interval of f, phi*f and phi^2*f.
  ///
  /// The slice is piecewise quadratic between the bump edges; adaptive
  /// Simpson runs on each smooth piece with a share of the relative
  /// tolerance proportional to the piece length.
  std::array<double, 3> integrals(const ScalarFn& phi, double tol, bool* depth_exhausted) const;

  std::size_t bump_count() const { return centers_.size(); }

 private:
  friend class DensityEstimate;
  DensitySlice(double x, Interval y, double hy, double scale, double floor0)
      : x_(x), y_(y), hy_(hy), inv_hy_(1.0 / hy), scale_(scale), floor0_(floor0) {}

  double x_;
  Interval y_;
  double hy_;
  double inv_hy_;
  double scale_;
  double floor0_;
  std::vector<double> centers_;  // sorted
  std::vector<double> weights_;
};

/// Boundary-corrected product-Epanechnikov kernel density on a rectangle.
///
/// Mirror images of every point across all four edges (when within the
/// kernel support of the edge) keep the mass inside the domain. The raw estimate
/// is normalized exactly, floored at kFloorMass/area and renormalized once;
/// floor() reports the post-renormalization lower bound.
class DensityEstimate {
 public:
  /// f-hat(x, y); 0 outside the domain.
  double operator()(double x, double y) const;

  /// Cross-section at x (x must lie in the domain).
  DensitySlice slice(double x) const;

  const Domain& domain() const { return domain_; }
  const Bandwidths& bandwidths() const { return bandwidths_; }
  double floor() const { return scale_ * floor0_; }
  /// Lower clamp of the integral of f-hat over y:
  /// max(floor() * width_y, kMarginalFloor / width_x).
  double marginal_floor() const;
  std::size_t sample_size() const { return n_; }

 private:
  friend DensityEstimate fit_kde(SampleView, const Domain&, std::optional<Bandwidths>);
  DensityEstimate(Domain domain, Bandwidths bw, std::size_t n)
      : domain_(domain), bandwidths_(bw), n_(n) {}

  DensitySlice make_slice(double x, double scale) const;

  struct Image {
    double x;
    double y;
  };

  Domain domain_;
  Bandwidths bandwidths_;
  Bandwidths support_{};  // kernel half-widths, kKernelRadius * bandwidth
  std::size_t n_;
  std::vector<Image> images_;  // sorted by x
  double norm_ = 1.0;          // 1 / (n s_x s_y * raw mass), s = support
  double scale_ = 1.0;         // renormalization after flooring
  double floor0_ = 0.0;
};

/// Silverman rule h = 1.06 * sd * n^(-1/5), capped at a quarter of the
/// axis width (and set to the cap for a constant column).
double silverman_bandwidth(std::span<const double> values, double axis_width);

/// Fit on the preliminary points. Requires at least 10 points, all inside
/// the domain. Override bandwidths need kKernelRadius * h <= axis width.
DensityEstimate fit_kde(SampleView prelim, const Domain& domain,
                        std::optional<Bandwidths> bandwidths = std::nullopt);

struct ConditionalMoments {
  double marginal;  // integral of f-hat(x, y) dy
  double mean;      // m-hat(x)
  double second;    // v-hat(x)
  bool depth_exhausted = false;
};

/// All three y-integrals at x from one adaptive pass. The mean is clamped
/// into [chi1, chi2]; the second moment into the range of phi^2 and to at
/// least mean^2.
ConditionalMoments conditional_moments(const DensityEstimate& de, const ScalarFn& phi,
                                       PhiBounds bounds, double x,
                                       double tol = kDefaultSimpsonTol);

double marginal_x(const DensityEstimate& de, double x, double tol = kDefaultSimpsonTol);
double conditional_mean(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                        double x, double tol = kDefaultSimpsonTol);
double conditional_second_moment(const DensityEstimate& de, const ScalarFn& phi, PhiBounds bounds,
                                 double x, double tol = kDefaultSimpsonTol);

}  // namespace effsens
