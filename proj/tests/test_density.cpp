#include <gtest/gtest.h>

#include <cmath>

#include "effsens/density.hpp"
#include "effsens/error.hpp"
#include "effsens/quadrature.hpp"
#include "effsens/rng.hpp"

using namespace effsens;

namespace {

SampleSet uniform_square(std::size_t n, std::uint64_t seed) {
  const CounterUniform ux(seed, 11), uy(seed, 12);
  SampleSet s;
  for (std::size_t i = 0; i < n; ++i) {
    s.x.push_back(ux.uniform(i));
    s.y.push_back(uy.uniform(i));
  }
  return s;
}

const Domain kUnit{Interval(0.0, 1.0), Interval(0.0, 1.0)};
const ScalarFn kId = [](double y) { return y; };

// Independent check of the total mass: composite Gauss fine enough that the
// piecewise-quadratic kinks contribute well below 1e-4.
double total_mass(const DensityEstimate& de) {
  const auto gx = composite_gauss_rule(4, 200, de.domain().x);
  const auto gy = composite_gauss_rule(4, 200, de.domain().y);
  double sum = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const DensitySlice s = de.slice(gx.nodes[i]);
    double inner = 0.0;
    for (std::size_t j = 0; j < gy.size(); ++j) inner += gy.weights[j] * s(gy.nodes[j]);
    sum += gx.weights[i] * inner;
  }
  return sum;
}

}  // namespace

TEST(InferDomain, Examples) {
  const std::vector<double> x{0.0, 1.0}, y{0.0, 1.0};
  const Domain d0 = infer_domain(SampleView(x, y), 0.0);
  EXPECT_EQ(d0.x, Interval(0.0, 1.0));
  EXPECT_EQ(d0.y, Interval(0.0, 1.0));
  const Domain d5 = infer_domain(SampleView(x, y), 0.05);
  EXPECT_NEAR(d5.x.lo(), -0.05, 1e-15);
  EXPECT_NEAR(d5.y.hi(), 1.05, 1e-15);
  const std::vector<double> c{3.0, 3.0};
  const Domain dc = infer_domain(SampleView(x, c), 0.05);
  EXPECT_NEAR(dc.y.lo(), 2.85, 1e-12);
  EXPECT_NEAR(dc.y.hi(), 3.15, 1e-12);
}

TEST(InferDomain, Errors) {
  const std::vector<double> none;
  EXPECT_THROW(infer_domain(SampleView(none, none), 0.0), ArgumentError);
  const std::vector<double> x{0.0, 1.0};
  EXPECT_THROW(infer_domain(SampleView(x, x), -0.1), ArgumentError);
}

TEST(Silverman, RuleAndCap) {
  const std::vector<double> v{0.0, 1.0, 2.0, 3.0, 4.0};
  const double sd = std::sqrt(2.5);
  EXPECT_NEAR(silverman_bandwidth(v, 100.0), 1.06 * sd * std::pow(5.0, -0.2), 1e-14);
  EXPECT_NEAR(silverman_bandwidth(v, 2.0), 0.5, 1e-15);
  const std::vector<double> flat(20, 1.0);
  EXPECT_NEAR(silverman_bandwidth(flat, 2.0), 0.5, 1e-15);
}

TEST(Kde, UniformSquare) {
  const SampleSet s = uniform_square(10000, 1);
  const DensityEstimate de = fit_kde(s.view(), kUnit);
  const double c = de(0.5, 0.5);
  EXPECT_GE(c, 0.9);
  EXPECT_LE(c, 1.1);
  EXPECT_NEAR(total_mass(de), 1.0, 1e-3);
  EXPECT_EQ(de(1.2, 0.5), 0.0);
  EXPECT_EQ(de(0.5, -0.1), 0.0);
}

TEST(Kde, ClusterFloorAndNormalization) {
  SampleSet s;
  for (int i = 0; i < 12; ++i) {
    s.x.push_back(0.5 + 0.001 * i);
    s.y.push_back(0.5 - 0.001 * i);
  }
  const DensityEstimate de = fit_kde(s.view(), kUnit, Bandwidths{0.05, 0.05});
  EXPECT_GT(de.floor(), 0.0);
  EXPECT_GE(de(0.0, 0.0), de.floor());
  EXPECT_GE(de(1.0, 0.0), de.floor());
  EXPECT_NEAR(total_mass(de), 1.0, 1e-3);
}

TEST(Kde, Errors) {
  const SampleSet small = uniform_square(9, 2);
  EXPECT_THROW(fit_kde(small.view(), kUnit), ConfigError);
  SampleSet outside = uniform_square(20, 2);
  outside.x[3] = 1.5;
  EXPECT_THROW(fit_kde(outside.view(), kUnit), ArgumentError);
  const SampleSet ok = uniform_square(20, 2);
  EXPECT_THROW(fit_kde(ok.view(), kUnit, Bandwidths{-1.0, 0.1}), ConfigError);
  EXPECT_THROW(fit_kde(ok.view(), kUnit, Bandwidths{0.1, 0.9}), ConfigError);
}

TEST(Kde, SupErrorShrinksWithSampleSize) {
  double prev = 1e300;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    double avg = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const DensityEstimate de = fit_kde(uniform_square(n, 100 + seed).view(), kUnit);
      double sup = 0.0;
      for (int i = 1; i < 10; ++i)
        for (int j = 1; j < 10; ++j) sup = std::max(sup, std::abs(de(0.1 * i, 0.1 * j) - 1.0));
      avg += sup / 20.0;
    }
    EXPECT_LT(avg, prev) << "n1=" << n;
    prev = avg;
  }
}

TEST(Marginal, UniformAndFloor) {
  const DensityEstimate de = fit_kde(uniform_square(5000, 3).view(), kUnit);
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const double m = marginal_x(de, x);
    EXPECT_GE(m, de.floor() * 1.0);
    if (x > 0.0 && x < 1.0) {
      EXPECT_NEAR(m, 1.0, 0.1);
    }
  }
  EXPECT_THROW(marginal_x(de, 1.01), ArgumentError);
}

TEST(Marginal, ProductFormSeparates) {
  // A full grid of points gives an exactly separable kernel sum.
  SampleSet s;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      s.x.push_back((i + 0.5) / 20.0);
      s.y.push_back(std::pow((j + 0.5) / 20.0, 1.5));
    }
  const DensityEstimate de = fit_kde(s.view(), kUnit);
  for (double x : {0.3, 0.55}) {
    const double m = marginal_x(de, x);
    const double ratio = de(x, 0.4) / de(0.7, 0.4);
    EXPECT_NEAR(m / marginal_x(de, 0.7), ratio, 1e-6);
  }
  // Conditional mean is constant in x and equals the y-mean of the slice.
  const PhiBounds b{0.0, 1.0};
  const double m0 = conditional_mean(de, kId, b, 0.2);
  for (double x : {0.4, 0.6, 0.8}) EXPECT_NEAR(conditional_mean(de, kId, b, x), m0, 1e-7);
  const auto y_rule = composite_gauss_rule(4, 400, kUnit.y);
  const DensitySlice sl = de.slice(0.5);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < y_rule.size(); ++k) {
    num += y_rule.weights[k] * y_rule.nodes[k] * sl(y_rule.nodes[k]);
    den += y_rule.weights[k] * sl(y_rule.nodes[k]);
  }
  EXPECT_NEAR(m0, num / den, 1e-6);
}

TEST(ConditionalMoments, ConstantPhi) {
  const DensityEstimate de = fit_kde(uniform_square(500, 4).view(), kUnit);
  const ScalarFn five = [](double) { return 5.0; };
  const ScalarFn two = [](double) { return 2.0; };
  for (double x : {0.0, 0.3, 1.0}) {
    EXPECT_EQ(conditional_mean(de, five, {5.0, 5.0}, x), 5.0);
    EXPECT_NEAR(conditional_second_moment(de, two, {2.0, 2.0}, x), 4.0, 1e-12);
  }
}

TEST(ConditionalMoments, IndependentUniform) {
  const DensityEstimate de = fit_kde(uniform_square(5000, 5).view(), kUnit);
  for (double x : {0.2, 0.5, 0.8}) {
    const auto m = conditional_moments(de, kId, {0.0, 1.0}, x);
    EXPECT_NEAR(m.mean, 0.5, 0.05);
    EXPECT_NEAR(m.second, 1.0 / 3.0, 0.05);
  }
}

TEST(ConditionalMoments, JensenHolds) {
  const CounterUniform u(6, 1), e(6, 2);
  SampleSet s;
  for (std::size_t i = 0; i < 400; ++i) {
    s.x.push_back(u.uniform(i));
    s.y.push_back(std::clamp(s.x.back() * s.x.back() + 0.2 * (e.uniform(i) - 0.5), 0.0, 1.0));
  }
  const DensityEstimate de = fit_kde(s.view(), kUnit);
  const ScalarFn sq = [](double y) { return y * y - 0.3; };
  for (int i = 0; i <= 50; ++i) {
    const auto m = conditional_moments(de, sq, {-0.3, 0.7}, i / 50.0);
    EXPECT_GE(m.second - m.mean * m.mean, -1e-9);
  }
}

TEST(ConditionalMoments, TracksDiagonal) {
  SampleSet s;
  const CounterUniform u(7, 0);
  for (std::size_t i = 0; i < 2000; ++i) {
    s.x.push_back(u.uniform(i));
    s.y.push_back(s.x.back());
  }
  const DensityEstimate de = fit_kde(s.view(), kUnit);
  const double tol = de.bandwidths().x + de.bandwidths().y;
  for (double x : {0.3, 0.5, 0.7}) EXPECT_NEAR(conditional_mean(de, kId, {0.0, 1.0}, x), x, tol);
}

TEST(Slice, IntegralsMatchFineQuadrature) {
  const DensityEstimate de = fit_kde(uniform_square(300, 8).view(), kUnit);
  const ScalarFn phi = [](double y) { return std::sin(3.0 * y); };
  const auto ref_rule = composite_gauss_rule(6, 2000, kUnit.y);
  for (double x : {0.05, 0.5, 0.93}) {
    const DensitySlice s = de.slice(x);
    const auto got = s.integrals(phi, 1e-10, nullptr);
    double i0 = 0.0, i1 = 0.0, i2 = 0.0;
    for (std::size_t k = 0; k < ref_rule.size(); ++k) {
      const double f = s(ref_rule.nodes[k]);
      const double p = phi(ref_rule.nodes[k]);
      i0 += ref_rule.weights[k] * f;
      i1 += ref_rule.weights[k] * p * f;
      i2 += ref_rule.weights[k] * p * p * f;
    }
    EXPECT_NEAR(got[0], i0, 1e-7);
    EXPECT_NEAR(got[1], i1, 1e-7);
    EXPECT_NEAR(got[2], i2, 1e-7);
  }
}
