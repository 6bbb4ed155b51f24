#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wue/error.hpp"
#include "wue/flat_weyl.hpp"

using namespace wue;

namespace {

Point pt1(double x) {
  Point p(1);
  p[0] = x;
  return p;
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// d^r/dx^r x^e at x.
double dpow(int e, int r, double x) {
  if (r > e) return 0.0;
  double c = 1;
  for (int i = 0; i < r; ++i) c *= e - i;
  return c * std::pow(x, e - r);
}

}  // namespace

TEST_CASE("Weyl coefficients are exact rationals") {
  CHECK(weyl_coefficient(1, 1) == Rational{1, 2});
  CHECK(weyl_coefficient(3, 1) == Rational{3, 2});
  CHECK(weyl_coefficient(4, 2) == Rational{3, 2});
  CHECK(weyl_coefficient(4, 4) == Rational{1, 16});
  CHECK(weyl_coefficient(2, 3) == Rational{0, 1});
}

TEST_CASE("flat Weyl images of low-degree monomials") {
  QuantizationContext ctx;
  ctx.hbar = 0.8;
  const auto r1 = euclidean(1);
  SUBCASE("X p") {
    MomentumPolynomial f(1);
    f.add(1, named_field(r1, "custom:sin(x)", 1));
    const auto d = weyl_image_flat(f, ctx);
    for (double x : {-0.4, 1.2}) {
      CHECK(std::abs(d.coefficient(1).at(pt1(x))[0] - Complex(0, -ctx.hbar) * std::sin(x)) < 1e-14);
      CHECK(std::abs(d.coefficient(0).at(pt1(x))[0] - Complex(0, -ctx.hbar) * 0.5 * std::cos(x)) < 1e-14);
    }
  }
  SUBCASE("p squared") {
    MomentumPolynomial f(1);
    f.add(2, named_field(r1, "constant", 2));
    const auto d = weyl_image_flat(f, ctx);
    CHECK(std::abs(d.coefficient(2).at(pt1(0.3))[0] + ctx.hbar * ctx.hbar) < 1e-15);
    CHECK(std::abs(d.coefficient(1).at(pt1(0.3))[0]) < 1e-15);
    CHECK(std::abs(d.coefficient(0).at(pt1(0.3))[0]) < 1e-15);
  }
  SUBCASE("constant") {
    MomentumPolynomial f(1);
    f.add(0, named_field(r1, "custom:2.5", 0));
    const auto d = weyl_image_flat(f, ctx);
    CHECK(d.order() == 0);
    CHECK(d.coefficient(0).at(pt1(1.0))[0].real() == doctest::Approx(2.5));
  }
}

TEST_CASE("Weyl image of x^a p^m agrees with the McCoy symmetrization") {
  // W(x^a p^m) = 2^{-a} sum_l binom(a,l) x^l P^m x^{a-l}; moving the
  // derivatives to the right gives the coefficient of d^{m-r}.
  QuantizationContext ctx;
  ctx.hbar = 1.7;
  const auto r1 = euclidean(1);
  for (int a = 0; a <= 3; ++a) {
    for (int m = 0; m <= 3; ++m) {
      MomentumPolynomial f(1);
      f.add(m, named_field(r1, "custom:x^" + std::to_string(a), m));
      const auto d = weyl_image_flat(f, ctx);
      const Complex pre = std::pow(Complex(0, -ctx.hbar), m);
      for (double x : {-0.7, 0.45, 1.3}) {
        for (int r = 0; r <= m; ++r) {
          double s = 0;
          for (int l = 0; l <= a; ++l) s += binom(a, l) * std::pow(x, l) * binom(m, r) * dpow(a - l, r, x);
          const Complex expected = pre * s / std::pow(2.0, a);
          CHECK(std::abs(d.coefficient(m - r).at(pt1(x))[0] - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
        }
      }
    }
  }
}

TEST_CASE("standard ordering reproduces the standard image") {
  QuantizationContext ctx;
  ctx.hbar = 0.6;
  const auto r2 = euclidean(2);
  MomentumPolynomial f(2);
  f.add(1, expression_tensor_field(r2, {"sin(x)*y", "x^2"}, 1));
  f.add(2, expression_tensor_field(r2, {"cos(y)", "x*y", "x*y", "exp(x)"}, 2));
  f.add(3, expression_tensor_field(r2, {"x", "y", "y", "1", "y", "1", "1", "x*x"}, 3));
  const auto lhs = a_image_flat(OrderingScheme::standard(), f, ctx);
  const auto rhs = standard_image_flat(f, ctx);
  Point q1(2), q2(2);
  q1 << 0.3, -0.2;
  q2 << -1.1, 0.9;
  const Point pts[] = {q1, q2};
  CHECK(max_coefficient_difference(lhs, rhs, pts) < 1e-13);
  CHECK(max_coefficient_difference(a_image_flat(OrderingScheme::weyl(), f, ctx), weyl_image_flat(f, ctx), pts) == 0.0);
}

TEST_CASE("dequantization inverts every ordering") {
  QuantizationContext ctx;
  ctx.hbar = 1.1;
  const auto r2 = euclidean(2);
  MomentumPolynomial f(2);
  f.add(0, expression_tensor_field(r2, {"x*y"}, 0));
  f.add(2, expression_tensor_field(r2, {"cos(y)", "x*y", "x*y", "exp(x)"}, 2));
  f.add(3, expression_tensor_field(r2, {"x", "y", "y", "1", "y", "1", "1", "x*x"}, 3));
  Point x(2);
  x << 0.4, -0.3;
  const double p[] = {0.7, -1.9};
  const Complex expected = eval_symbol(f, p, x);
  for (const char* name : {"weyl", "standard", "anti-standard", "symmetrized-standard", "standard-printed"}) {
    const auto a = OrderingScheme::preset(name, ctx.hbar);
    CHECK(std::abs(dequantize_flat(a, a_image_flat(a, f, ctx), p, x, ctx) - expected) < 1e-12);
  }

  CovariantOperator bad(2);
  Tensor<Complex> t(2, 2, 0.0);
  t.at({0, 1}) = 1.0;
  bad.add(2, TensorField::constant(t));
  CHECK_THROWS_AS(dequantize_flat(OrderingScheme::weyl(), bad, p, x, ctx), InversionError);
}

TEST_CASE("flat quantizer matrix") {
  QuantizationContext ctx;
  ctx.hbar = 0.9;
  FlatQuantizerSpec spec;
  spec.p = 0.4;
  spec.x = -0.3;
  spec.truncation = 12;
  const auto m = quantizer_matrix_flat(spec, ctx);
  CHECK(hermiticity_defect(m.values) < 1e-12);
  // <h0|Omega|h0> = 2 exp(-x^2 - p^2/hbar^2)
  const double h00 = 2.0 * std::exp(-spec.x * spec.x - spec.p * spec.p / (ctx.hbar * ctx.hbar));
  CHECK(std::abs(m.values(0, 0) - h00) < 1e-13);

  spec.p = 0.0;
  spec.x = 0.0;
  spec.truncation = 8;
  const auto origin = quantizer_matrix_flat(spec, ctx);
  for (int k = 0; k < 8; ++k) CHECK(origin.values(k, k).real() == doctest::Approx(k % 2 == 0 ? 2.0 : -2.0));
  CHECK(std::abs(cesaro_trace(origin.values) - 1.0) < 2e-3);
}
