#include <gtest/gtest.h>

#include <cmath>

#include "effsens/error.hpp"
#include "effsens/orthobasis.hpp"
#include "effsens/quadrature.hpp"

using namespace effsens;

TEST(Legendre, KnownValues) {
  const LegendreBasis1D unit(Interval(0.0, 1.0), 3);
  EXPECT_NEAR(unit.eval(0, 0.7), 1.0, 1e-15);
  // sqrt(3) (2x - 1) at x = 1.
  EXPECT_NEAR(unit.eval(1, 1.0), std::sqrt(3.0), 1e-14);
  const LegendreBasis1D sym(Interval(-1.0, 1.0), 2);
  // sqrt(5/2) (3x^2 - 1) / 2 at x = 0.
  EXPECT_NEAR(sym.eval(2, 0.0), -std::sqrt(5.0 / 8.0), 1e-14);
}

TEST(Legendre, ContractViolations) {
  const LegendreBasis1D b(Interval(0.0, 1.0), 3);
  EXPECT_THROW(b.eval(4, 0.5), ArgumentError);
  EXPECT_THROW(b.eval(-1, 0.5), ArgumentError);
  EXPECT_THROW(b.eval(1, 1.5), ArgumentError);
  EXPECT_THROW(b.eval(1, -0.01), ArgumentError);
}

TEST(Legendre, EvalAllMatchesEval) {
  const LegendreBasis1D b(Interval(-2.0, 5.0), 12);
  std::vector<double> all(b.size());
  for (double x : {-2.0, -1.3, 0.0, 2.2, 5.0}) {
    b.eval_all(x, all);
    for (int k = 0; k <= 12; ++k) EXPECT_NEAR(all[k], b.eval(k, x), 1e-12);
  }
}

TEST(Legendre, OrthonormalToDegree20) {
  for (const Interval iv : {Interval(0.0, 1.0), Interval(-3.0, 7.5)}) {
    const LegendreBasis1D b(iv, 20);
    const auto rule = gauss_rule(64, iv);
    for (int j = 0; j <= 20; ++j)
      for (int k = 0; k <= 20; ++k) {
        const double v = integrate_1d([&](double x) { return b.eval(j, x) * b.eval(k, x); }, rule);
        EXPECT_NEAR(v, j == k ? 1.0 : 0.0, 1e-10) << j << "," << k;
      }
  }
}

TEST(Legendre, AffineEquivariance) {
  const double a = 2.0, c = 6.0;
  const LegendreBasis1D unit(Interval(0.0, 1.0), 8);
  const LegendreBasis1D moved(Interval(a, c), 8);
  for (int k = 0; k <= 8; ++k)
    for (double t : {0.0, 0.1, 0.5, 0.77, 1.0})
      EXPECT_NEAR(moved.eval(k, a + (c - a) * t), unit.eval(k, t) / std::sqrt(c - a), 1e-12);
}

TEST(IndexSet, Sizes) {
  EXPECT_EQ(build_index_set(10000).k_x(), 10);
  EXPECT_EQ(build_index_set(10000).size(), 100u);
  EXPECT_EQ(build_index_set(100).k_x(), 3);
  EXPECT_EQ(build_index_set(100).size(), 9u);
  EXPECT_EQ(build_index_set(16, 2).size(), 4u);
  EXPECT_THROW(build_index_set(3), ArgumentError);
}

TEST(IndexSet, RectangularLayout) {
  const auto m = BasisIndexSet::rectangular(3, 4);
  ASSERT_EQ(m.size(), 12u);
  for (std::size_t p = 0; p < m.size(); ++p) {
    const auto [ix, iy] = m.pairs()[p];
    EXPECT_LT(ix, 3);
    EXPECT_LT(iy, 4);
    EXPECT_EQ(m.position(ix, iy), p);
  }
}

TEST(Tensor, KnownValues) {
  const LegendreBasis1D b(Interval(0.0, 1.0), 2);
  EXPECT_NEAR(tensor_eval(b, b, {0, 0}, 0.3, 0.9), 1.0, 1e-15);
  EXPECT_NEAR(tensor_eval(b, b, {1, 0}, 1.0, 0.3), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(tensor_eval(b, b, {1, 1}, 0.5, 0.5), 0.0, 1e-15);
}

class Projection : public ::testing::Test {
 protected:
  Interval unit{0.0, 1.0};
  LegendreBasis1D b{unit, 4};
  QuadratureRule2D rule{gauss_rule(16, unit), gauss_rule(16, unit)};
};

TEST_F(Projection, Constant) {
  const auto m = BasisIndexSet::rectangular(3, 3);
  const auto a = project_coefficients([](double, double) { return 1.0; }, m, b, b, rule);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], i == 0 ? 1.0 : 0.0, 1e-12);
}

TEST_F(Projection, BasisElement) {
  const auto m = BasisIndexSet::rectangular(3, 3);
  const auto a = project_coefficients(
      [&](double x, double y) { return tensor_eval(b, b, {1, 1}, x, y); }, m, b, b, rule);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(a[i], i == m.position(1, 1) ? 1.0 : 0.0, 1e-10);
}

TEST_F(Projection, LinearTarget) {
  const auto m = BasisIndexSet::rectangular(3, 3);
  const auto a = project_coefficients([](double x, double) { return x; }, m, b, b, rule);
  // int_0^1 x sqrt(3)(2x - 1) dx = sqrt(3)/6.
  for (std::size_t i = 0; i < a.size(); ++i) {
    double expect = 0.0;
    if (i == m.position(0, 0)) expect = 0.5;
    if (i == m.position(1, 0)) expect = std::sqrt(3.0) / 6.0;
    EXPECT_NEAR(a[i], expect, 1e-12);
  }
  const auto m2 = BasisIndexSet::rectangular(2, 2);
  const auto a2 = project_coefficients([](double x, double) { return x; }, m2, b, b, rule);
  EXPECT_NEAR(evaluate_projection(a2, m2, b, b, 0.25, 0.9), 0.25, 1e-12);
}

TEST_F(Projection, ZeroAndMismatch) {
  const auto m = BasisIndexSet::rectangular(2, 2);
  const std::vector<double> zero(4, 0.0);
  EXPECT_EQ(evaluate_projection(zero, m, b, b, 0.3, 0.4), 0.0);
  const std::vector<double> wrong(3, 0.0);
  EXPECT_THROW(evaluate_projection(wrong, m, b, b, 0.3, 0.4), ArgumentError);
}

TEST_F(Projection, ReproducesPolynomialsAndIsIdempotent) {
  const auto m = BasisIndexSet::rectangular(4, 4);
  auto poly = [](double x, double y) { return 1.0 - 2.0 * x * x * x * y + 0.5 * y * y - x * y; };
  const auto a = project_coefficients(poly, m, b, b, rule);
  for (double x : {0.0, 0.3, 0.8})
    for (double y : {0.1, 0.5, 1.0}) EXPECT_NEAR(evaluate_projection(a, m, b, b, x, y), poly(x, y), 1e-10);
  const auto again = project_coefficients(
      [&](double x, double y) { return evaluate_projection(a, m, b, b, x, y); }, m, b, b, rule);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(again[i], a[i], 1e-10);
}
