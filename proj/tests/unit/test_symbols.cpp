#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wue/error.hpp"
#include "wue/expression.hpp"
#include "wue/quadrature.hpp"
#include "wue/symbols.hpp"

using namespace wue;
using std::numbers::pi;

namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}


}  // namespace

TEST_CASE("expression parser evaluates and reports positions") {
  const auto e = Expression::parse("2*sin(theta)^2 + cos(q1)/3 - -1", {"theta", "phi"});
  const double x[] = {0.3, 0.8};
  CHECK(e.evaluate(std::span<const double>(x)) ==
        doctest::Approx(2 * std::pow(std::sin(0.3), 2) + std::cos(0.8) / 3 + 1).epsilon(1e-14));
  const auto jets = coordinate_jets(pt({0.3, 0.8}), 2);
  const RJet j = e.evaluate(std::span<const RJet>(jets));
  // d/dtheta of 2 sin^2 = 2 sin(2 theta)
  const int d0[] = {0};
  CHECK(j.partial(d0) == doctest::Approx(2 * std::sin(0.6)).epsilon(1e-13));

  CHECK_THROWS_AS(Expression::parse("1 + foo", {"x"}), ConfigError);
  CHECK_THROWS_AS(Expression::parse("bar(x)", {"x"}), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(x", {"x"}), ConfigError);
  try {
    Expression::parse("x + y", {"x"});
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("position 4") != std::string::npos);
  }
  const double two[] = {2.0};
  CHECK(Expression::parse("x^0.5 * pi", {"x"}).evaluate(std::span<const double>(two)) ==
        doctest::Approx(std::sqrt(2.0) * pi));
}

TEST_CASE("Gauss-Hermite and Gauss-Legendre rules integrate exactly") {
  for (int n : {4, 16, 64, 200}) {
    const auto gh = gauss_hermite(n);
    double m0 = 0, m2 = 0, m4 = 0, g = 0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      const double x = gh.nodes[i];
      m0 += gh.weights[i];
      m2 += gh.weights[i] * x * x;
      m4 += gh.weights[i] * x * x * x * x;
      g += gh.scaled_weights[i] * std::exp(-2.0 * x * x);
    }
    CHECK(m0 == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-13));
    if (n >= 4) CHECK(m4 == doctest::Approx(3 * std::sqrt(pi) / 4).epsilon(1e-12));
    if (n >= 64) CHECK(g == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-12));
  }
  const auto gl = gauss_legendre(12, 0.0, 2.0);
  double s = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i][0], 9);
  CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10).epsilon(1e-13));

  const auto est = integrate_adaptive([](double x) { return std::cos(7 * x) * std::exp(-x * x); }, -6, 6, 1e-12);
  CHECK(est.value == doctest::Approx(std::sqrt(pi) * std::exp(-49.0 / 4)).epsilon(1e-9));
}

TEST_CASE("eval_symbol") {
  const auto r1 = euclidean(1);
  MomentumPolynomial f(1);
  f.add(2, named_field(r1, "constant", 2));
  const double p3[] = {3.0};
  CHECK(eval_symbol(f, p3, pt({0.4})).real() == doctest::Approx(9.0));

  const auto s1 = circle();
  MomentumPolynomial g(1);
  g.add(1, named_field(s1, "cos-theta", 1));
  const double p2[] = {2.0};
  CHECK(eval_symbol(g, p2, pt({0.0})).real() == doctest::Approx(2.0));

  MomentumPolynomial c(1);
  c.add(0, TensorField::constant(Tensor<Complex>(0, 1, Complex(1.5, -2.0))));
  CHECK(std::abs(eval_symbol(c, p2, pt({1.0})) - Complex(1.5, -2.0)) < 1e-15);
  CHECK_THROWS(eval_symbol(c, std::span<const double>(), pt({1.0})));
}

TEST_CASE("ordering presets and inverse") {
  const auto st = OrderingScheme::standard();
  CHECK(std::abs(st.coefficient(1) - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(st.coefficient(2) - Complex(-0.125, 0)) < 1e-15);
  CHECK_FALSE(st.has_real_coefficients());
  CHECK(OrderingScheme::symmetrized_standard().has_real_coefficients());
  CHECK(OrderingScheme::symmetrized_standard().coefficient(2).real() == doctest::Approx(-1.0 / 8));
  CHECK(OrderingScheme::symmetrized_standard().coefficient(4).real() == doctest::Approx(1.0 / 384));
  CHECK(OrderingScheme::weyl().is_weyl());
  // exp(-ix/2)^-1 = exp(+ix/2)
  const auto inv = st.inverse();
  const auto anti = OrderingScheme::anti_standard();
  for (int k = 0; k <= kMaxDegree; ++k) CHECK(std::abs(inv.coefficient(k) - anti.coefficient(k)) < 1e-15);
  CHECK(std::abs(OrderingScheme::standard_printed(2.0).coefficient(1) - Complex(0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(OrderingScheme::preset("normal", 1.0), ConfigError);
  CHECK_THROWS_AS(OrderingScheme::from_coefficients("bad", {2.0}), ConfigError);
}

TEST_CASE("delta_apply") {
  QuantizationContext ctx;
  ctx.hbar = 0.7;
  const auto s2 = sphere(1.0);
  SUBCASE("constant symbols are annihilated") {
    MomentumPolynomial f(2);
    f.add(0, named_field(s2, "cos-theta", 0));
    CHECK(delta_apply(s2, f, ctx).top() == -1);
  }
  SUBCASE("degree one gives minus hbar times the divergence") {
    // X = (cos theta, sin phi): div X = d_a X^a + G^b_ab X^a = -sin th + cos phi + cot th cos th
    const auto x = TensorField::from_components(1, 2, [](std::span<const RJet> c) {
      return std::vector<CJet>{to_complex(cos(c[0])), to_complex(sin(c[1]))};
    });
    MomentumPolynomial f(2);
    f.add(1, x);
    const auto d = delta_apply(s2, f, ctx);
    for (const auto& q : {pt({0.7, 0.2}), pt({1.9, -2.0})}) {
      const double th = q[0], ph = q[1];
      const double div = -std::sin(th) + std::cos(ph) + std::cos(th) / std::sin(th) * std::cos(th);
      CHECK(d.coefficient(0).at(q)[0].real() == doctest::Approx(-ctx.hbar * div).epsilon(1e-12));
    }
  }
  SUBCASE("polar p_r") {
    const auto pol = polar_plane();
    const auto er = TensorField::from_components(1, 2, [](std::span<const RJet> c) {
      return std::vector<CJet>{CJet::constant(c[0].space(), 1.0, c[0].order()), CJet(c[0].space(), c[0].order())};
    });
    MomentumPolynomial f(2);
    f.add(1, er);
    const auto d = delta_apply(pol, f, ctx);
    for (double r : {0.5, 1.0, 2.0}) CHECK(d.coefficient(0).at(pt({r, 0.3}))[0].real() == doctest::Approx(-ctx.hbar / r));
  }
  SUBCASE("second power on degree one vanishes") {
    MomentumPolynomial f(1);
    f.add(1, named_field(circle(), "cos-theta", 1));
    const auto d2 = delta_apply(circle(), delta_apply(circle(), f, ctx), ctx);
    CHECK(d2.top() == -1);
  }
}

TEST_CASE("standard ordering transform on the line") {
  QuantizationContext ctx;
  ctx.hbar = 1.3;
  const auto r1 = euclidean(1);
  MomentumPolynomial f(1);
  f.add(1, named_field(r1, "custom:sin(x) + x^2", 1));
  const auto g = ordering_transform(r1, OrderingScheme::standard(), f, ctx);
  // X p + (i hbar / 2) X'
  for (double x : {-1.0, 0.2, 2.5}) {
    const Complex c0 = g.coefficient(0).at(pt({x}))[0];
    CHECK(std::abs(c0 - Complex(0, ctx.hbar / 2) * (std::cos(x) + 2 * x)) < 1e-12);
    CHECK(std::abs(g.coefficient(1).at(pt({x}))[0] - (std::sin(x) + x * x)) < 1e-12);
  }
  const Point pts[] = {pt({0.1}), pt({0.9})};
  CHECK(max_coefficient_difference(ordering_transform(r1, OrderingScheme::weyl(), f, ctx), f, pts) == 0.0);
}

TEST_CASE("operator matrices") {
  QuantizationContext ctx;
  ctx.hbar = 0.5;
  const auto s1 = circle();
  const FourierBasis basis(6);
  SUBCASE("identity") {
    CovariantOperator id(1);
    id.add(0, named_field(s1, "constant", 0));
    const auto m = operator_matrix(s1, id, basis, ctx);
    CHECK((m.values - Eigen::MatrixXcd::Identity(13, 13)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(m.labels.front() == -6);
    CHECK(hermiticity_defect(m.values) < 1e-13);
  }
  SUBCASE("momentum is diagonal") {
    CovariantOperator d(1);
    d.add(1, named_field(s1, "constant", 1).scaled(Complex(0, -ctx.hbar)));
    const auto m = operator_matrix(s1, d, basis, ctx);
    for (int i = 0; i < 13; ++i)
      for (int j = 0; j < 13; ++j)
        CHECK(std::abs(m.values(i, j) - (i == j ? Complex(ctx.hbar * (i - 6)) : Complex(0))) < 1e-12);
  }
  SUBCASE("cos theta is tridiagonal") {
    CovariantOperator d(1);
    d.add(0, named_field(s1, "cos-theta", 0));
    const auto m = operator_matrix(s1, d, basis, ctx);
    CHECK(std::abs(m.values(3, 4) - 0.5) < 1e-13);
    CHECK(std::abs(m.values(4, 3) - 0.5) < 1e-13);
    CHECK(std::abs(m.values(3, 5)) < 1e-13);
    CHECK(std::abs(m.values(3, 3)) < 1e-13);
  }
  SUBCASE("Hermite basis: x has the ladder structure") {
    const auto r1 = euclidean(1);
    CovariantOperator x(1);
    x.add(0, named_field(r1, "custom:x", 0));
    const auto m = operator_matrix(r1, x, HermiteBasis(8), ctx);
    for (int n = 0; n + 1 < 8; ++n) CHECK(m.values(n, n + 1).real() == doctest::Approx(std::sqrt((n + 1) / 2.0)));
    CHECK(std::abs(m.values(0, 2)) < 1e-12);
  }
}

TEST_CASE("named fields") {
  const auto s2 = sphere(2.0);
  const auto g = named_field(s2, "inverse-metric", 2).at(pt({1.0, 0.0}));
  CHECK(g.at({0, 0}).real() == doctest::Approx(0.25));
  CHECK(g.at({1, 1}).real() == doctest::Approx(0.25 / std::pow(std::sin(1.0), 2)));
  const auto c = named_field(s2, "custom:theta*phi", 2).at(pt({1.0, 0.5}));
  CHECK(c.at({0, 0}).real() == doctest::Approx(0.5));
  CHECK(c.at({0, 1}) == Complex(0.0));
  CHECK_THROWS_AS(named_field(s2, "inverse-metric", 1), ConfigError);
  CHECK_THROWS_AS(named_field(s2, "warp", 0), ConfigError);
  const auto e = expression_tensor_field(s2, {"1", "theta", "0", "phi"}, 2).at(pt({1.0, 0.5}));
  CHECK(e.at({0, 1}).real() == doctest::Approx(0.5));
  CHECK(e.at({1, 0}).real() == doctest::Approx(0.5));
  CHECK(e.at({1, 1}).real() == doctest::Approx(0.5));
}

TEST_CASE("point transformation: polar Delta equals the Cartesian one") {
  QuantizationContext ctx;
  ctx.hbar = 0.9;
  const auto pol = polar_plane();
  MomentumPolynomial f(2);
  f.add(0, expression_tensor_field(pol, {"r*sin(phi)"}, 0));
  f.add(1, expression_tensor_field(pol, {"cos(phi)", "r^2"}, 1));
  f.add(2, expression_tensor_field(pol, {"1 + r", "sin(phi)", "sin(phi)", "1/r^2"}, 2));
  f.add(3, named_field(pol, "custom:r*cos(phi)", 3));
  for (const auto& [p, q] : {std::pair{std::vector<double>{0.3, -1.1}, pt({0.8, 0.4})},
                             std::pair{std::vector<double>{-2.0, 0.5}, pt({2.3, -2.9})}}) {
    const auto s = point_transform_sample(f, p, q, ctx);
    CHECK(std::abs(s.polar - s.cartesian) < 1e-12);
    CHECK(std::abs(s.polar) > 1e-3);
  }
  MomentumPolynomial pr(2);
  pr.add(1, expression_tensor_field(pol, {"1", "0"}, 1));
  const double p[] = {1.0, 0.0};
  for (double r : {0.5, 1.0, 2.0}) CHECK(point_transform_sample(pr, p, pt({r, 0.7}), ctx).cartesian.real() == doctest::Approx(-ctx.hbar / r));
}
