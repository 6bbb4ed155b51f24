#include <doctest.h>

#include <cmath>

#include "wue/error.hpp"
#include "wue/flat_weyl.hpp"
#include "wue/wue_curved.hpp"

using namespace wue;

namespace {

Point pt2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

std::vector<Point> sphere_points() { return {pt2(0.7, 0.3), pt2(1.4, -2.2), pt2(2.2, 1.0)}; }

TensorField generic_rank2(const ManifoldModel& m) {
  return expression_tensor_field(m, {"1 + cos(theta)^2", "sin(phi)*sin(theta)", "sin(phi)*sin(theta)", "2 + cos(phi)"},
                                 2);
}

}  // namespace

TEST_CASE("degree-one image on the sphere") {
  QuantizationContext ctx;
  ctx.hbar = 0.9;
  const auto s2 = sphere(1.0);
  MomentumPolynomial f(2);
  const auto x = expression_tensor_field(s2, {"cos(theta)*sin(phi)", "sin(theta)"}, 1);
  f.add(1, x);
  const auto d = wue_weyl_image({s2, f}, ctx);
  const auto pts = sphere_points();
  CovariantOperator expected(2);
  expected.add(1, x.scaled(Complex(0, -ctx.hbar)));
  expected.add(0, divergence_field(s2, x).scaled(Complex(0, -ctx.hbar / 2)));
  CHECK(max_coefficient_difference(d, expected, pts) < 1e-12);
}

TEST_CASE("degree-two image carries X R / 12") {
  QuantizationContext ctx;
  ctx.hbar = 1.3;
  const auto s2 = sphere(1.0);
  const auto x = generic_rank2(s2);
  MomentumPolynomial f(2);
  f.add(2, x);
  const auto d = wue_weyl_image({s2, f}, ctx);
  const Complex pre = std::pow(Complex(0, -ctx.hbar), 2);
  const auto div = divergence_field(s2, x);
  const auto divdiv = divergence_field(s2, div);
  const auto xr = contract_leading(x, ricci_field(s2));
  for (const auto& q : sphere_points()) {
    CHECK(max_abs(Tensor<Complex>(d.coefficient(2).at(q))) > 0.0);
    const auto c2 = d.coefficient(2).at(q), x2 = x.at(q);
    for (std::size_t i = 0; i < c2.size(); ++i) CHECK(std::abs(c2[i] - pre * x2[i]) < 1e-12);
    const auto c1 = d.coefficient(1).at(q), d1 = div.at(q);
    for (std::size_t i = 0; i < c1.size(); ++i) CHECK(std::abs(c1[i] - pre * d1[i]) < 1e-12);
    const Complex ricci_part = (d.coefficient(0).at(q)[0] - pre * 0.25 * divdiv.at(q)[0]) / (pre * xr.at(q)[0]);
    CHECK(std::abs(ricci_part - 1.0 / 12.0) < 1e-10);
  }
  SUBCASE("direct density jets flip the sign") {
    WueImageRequest req{s2, f};
    req.convention = VolumeJetConvention::direct;
    const auto dd = wue_weyl_image(req, ctx);
    const auto q = sphere_points()[0];
    const Complex ricci_part = (dd.coefficient(0).at(q)[0] - pre * 0.25 * divdiv.at(q)[0]) / (pre * xr.at(q)[0]);
    CHECK(std::abs(ricci_part + 1.0 / 12.0) < 1e-10);
  }
}

TEST_CASE("kinetic symbol maps to hbar^2/i^2 X nabla nabla") {
  QuantizationContext ctx;
  ctx.hbar = 0.7;
  for (const char* name : {"sphere:1", "sphere:2.5", "polar-plane", "euclidean:2"}) {
    const auto m = make_model(name);
    for (const auto& x : {inverse_metric_field(m), m.name().starts_with("sphere") ? generic_rank2(m) : inverse_metric_field(m)}) {
      const auto f = kinetic_symbol(m, x, ctx);
      const auto d = wue_weyl_image({m, f}, ctx);
      CovariantOperator expected(2);
      expected.add(2, x.scaled(-ctx.hbar * ctx.hbar));
      const std::vector<Point> pts = m.name() == "polar-plane" ? std::vector<Point>{pt2(0.8, 0.2), pt2(1.9, -1.0)}
                                                               : sphere_points();
      CHECK_MESSAGE(max_coefficient_difference(d, expected, pts) < 1e-10, name);
    }
  }
  const auto s2 = sphere(1.0);
  const auto f = kinetic_symbol(s2, ctx);
  // Unit sphere: g^{ab} p p + hbar^2 / 6.
  const double p[] = {0.4, -1.2};
  const auto q = pt2(1.1, 0.5);
  const double gpp = p[0] * p[0] + p[1] * p[1] / std::pow(std::sin(1.1), 2);
  CHECK(std::abs(eval_symbol(f, p, q) - (gpp + ctx.hbar * ctx.hbar / 6)) < 1e-12);
}

TEST_CASE("standard image: both construction paths agree") {
  QuantizationContext ctx;
  ctx.hbar = 0.8;
  const auto s2 = sphere(1.0);
  MomentumPolynomial f(2);
  f.add(0, expression_tensor_field(s2, {"cos(theta)"}, 0));
  f.add(1, expression_tensor_field(s2, {"cos(theta)*sin(phi)", "sin(theta)"}, 1));
  f.add(2, generic_rank2(s2));
  f.add(3, expression_tensor_field(s2, {"1", "cos(phi)", "cos(phi)", "0", "cos(phi)", "0", "0", "sin(theta)"}, 3));
  WueImageRequest req{s2, f};
  req.ordering = OrderingScheme::standard();
  const auto pts = sphere_points();
  CHECK(max_coefficient_difference(wue_image(req, ctx), wue_standard_image(req, ctx), pts) < 1e-8);

  MomentumPolynomial g(2);
  g.add(1, expression_tensor_field(s2, {"cos(theta)*sin(phi)", "sin(theta)"}, 1));
  CovariantOperator expected(2);
  expected.add(1, g.coefficient(1).scaled(Complex(0, -ctx.hbar)));
  CHECK(max_coefficient_difference(wue_standard_image({s2, g}, ctx), expected, pts) < 1e-12);
}

TEST_CASE("flat models reproduce the flat calculus") {
  QuantizationContext ctx;
  ctx.hbar = 1.1;
  const auto r2 = euclidean(2);
  MomentumPolynomial f(2);
  f.add(2, expression_tensor_field(r2, {"cos(y)", "x*y", "x*y", "exp(x)"}, 2));
  f.add(3, expression_tensor_field(r2, {"x", "y", "y", "1", "y", "1", "1", "x*x"}, 3));
  const std::vector<Point> pts = {pt2(0.3, -0.4), pt2(-1.0, 2.0)};
  CHECK(max_coefficient_difference(wue_weyl_image({r2, f}, ctx), weyl_image_flat(f, ctx), pts) < 1e-14);
  WueImageRequest req{r2, f};
  req.ordering = OrderingScheme::standard();
  CHECK(max_coefficient_difference(wue_standard_image(req, ctx), standard_image_flat(f, ctx), pts) < 1e-14);

  const double p[] = {0.6, -1.4};
  const auto d = weyl_image_flat(f, ctx);
  for (const auto& q : pts)
    CHECK(std::abs(dequantize_curved(r2, d, p, q, ctx) - dequantize_flat(OrderingScheme::weyl(), d, p, q, ctx)) < 1e-11);
}

TEST_CASE("circle: polynomial symbols are reproduced exactly") {
  QuantizationContext ctx;
  ctx.hbar = 0.6;
  const auto s1 = circle();
  Point q(1);
  q << 0.7;
  const double p[] = {1.7};
  for (int m = 0; m <= 4; ++m) {
    MomentumPolynomial f(1);
    f.add(m, named_field(s1, "cos-theta", m));
    const Complex tr = dequantize_curved(s1, wue_weyl_image({s1, f}, ctx), p, q, ctx);
    CHECK(std::abs(tr - std::cos(0.7) * std::pow(1.7, m)) < 1e-12);
  }
}

TEST_CASE("trace axiom defect") {
  QuantizationContext ctx;
  ctx.hbar = 0.75;
  const auto s2 = sphere(1.0);
  const std::vector<double> ps = {-3, -2, -1, 0, 1, 2, 3};
  std::vector<std::pair<std::vector<double>, Point>> samples;
  for (double p : ps) samples.push_back({{p * ctx.hbar, 0.3 * p * ctx.hbar}, pt2(1.2, 0.4)});
  const auto scan = defect_scan(s2, inverse_metric_field(s2), samples, ctx);
  for (const auto& s : scan.samples) CHECK(std::abs(s.defect - 2.0 * ctx.hbar * ctx.hbar / 3.0) < 1e-10);
  CHECK(scan.coefficient == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  SUBCASE("degree-one symbols have no defect") {
    MomentumPolynomial f(2);
    f.add(1, expression_tensor_field(s2, {"cos(theta)*sin(phi)", "sin(theta)"}, 1));
    const double p[] = {0.5, 1.5};
    CHECK(std::abs(axiom_defect({s2, f}, p, pt2(0.9, 0.1), ctx)) < 1e-11);
  }
  SUBCASE("Emmrich measure") {
    const auto em = defect_scan(s2, inverse_metric_field(s2), samples, ctx, {MeasureVariant::emmrich});
    CHECK(std::abs(em.samples[0].defect) > 0.1 * ctx.hbar * ctx.hbar);
  }
  SUBCASE("identity has unit trace") {
    CovariantOperator id(2);
    id.add(0, named_field(s2, "constant", 0));
    const double p[] = {2.0, -1.0};
    CHECK(std::abs(dequantize_curved(s2, id, p, pt2(0.5, 0.5), ctx) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(dequantize_curved(s2, CovariantOperator(2), std::vector<double>{0.0, 0.0}, pt2(0.01, 0.0), ctx),
                  DomainError);
}

TEST_CASE("order-four operators on the sphere are supported") {
  QuantizationContext ctx;
  const auto s2 = sphere(1.0);
  MomentumPolynomial f(2);
  f.add(4, named_field(s2, "cos-theta", 4));
  const double p[] = {0.3, 0.2};
  const Complex defect = axiom_defect({s2, f}, p, pt2(1.0, 0.0), ctx);
  CHECK(std::isfinite(defect.real()));
  CHECK(std::abs(defect) < 10.0);
}
