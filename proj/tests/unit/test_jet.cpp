#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wue/jet.hpp"

using namespace wue;

namespace {

// Taylor coefficient of x^k around 0 for a univariate jet.
double coeff1(const RJet& j, int k) {
  const int e[] = {k};
  return j.coefficient(e);
}

}  // namespace

TEST_CASE("jet space layout") {
  const JetSpace& s = JetSpace::get(3, 4);
  CHECK(s.size() == 35);  // C(7, 3)
  CHECK(s.size_upto(0) == 1);
  CHECK(s.size_upto(1) == 4);
  CHECK(s.size_upto(2) == 10);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<int> e(s.exponents(i).begin(), s.exponents(i).end());
    CHECK(s.index(e) == i);
  }
  CHECK(&JetSpace::get(3, 4) == &s);
}

TEST_CASE("univariate elementary functions match closed-form Taylor coefficients") {
  const JetSpace& s = JetSpace::get(1, 6);
  const double x0 = 0.37;
  const RJet x = RJet::variable(s, 0, x0);

  const RJet e = exp(x);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    CHECK(coeff1(e, k) == doctest::Approx(std::exp(x0) / fact).epsilon(1e-14));
  }
  // d^k/dx^k sin = sin(x + k pi/2)
  const RJet sn = sin(x);
  fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    CHECK(coeff1(sn, k) == doctest::Approx(std::sin(x0 + k * std::numbers::pi / 2) / fact).epsilon(1e-13));
  }
  // log: (-1)^{k+1} / (k x0^k)
  const RJet l = log(x);
  for (int k = 1; k <= 6; ++k)
    CHECK(coeff1(l, k) == doctest::Approx(((k % 2) ? 1.0 : -1.0) / (k * std::pow(x0, k))).epsilon(1e-12));
  // (1 + x)^{1/2} at 0: binomial coefficients
  const RJet y = RJet::variable(s, 0, 1.0);
  const RJet r = sqrt(y);
  const double binom[] = {1.0, 0.5, -0.125, 0.0625, -0.0390625, 0.02734375, -0.0205078125};
  for (int k = 0; k <= 6; ++k) CHECK(coeff1(r, k) == doctest::Approx(binom[k]).epsilon(1e-14));
}

TEST_CASE("atan, atan2 and acos derivatives") {
  const JetSpace& s = JetSpace::get(1, 5);
  const double x0 = -0.8;
  const RJet x = RJet::variable(s, 0, x0);
  const RJet a = atan(x);
  // atan'(x) = 1/(1+x^2), atan''(x) = -2x/(1+x^2)^2
  CHECK(coeff1(a, 0) == doctest::Approx(std::atan(x0)));
  CHECK(coeff1(a, 1) == doctest::Approx(1.0 / (1 + x0 * x0)).epsilon(1e-14));
  CHECK(coeff1(a, 2) * 2 == doctest::Approx(-2 * x0 / std::pow(1 + x0 * x0, 2)).epsilon(1e-13));
  // atan2(sin t, cos t) = t for t in the left half plane
  const RJet t = RJet::variable(s, 0, 2.9);
  const RJet back = atan2(sin(t), cos(t));
  CHECK(coeff1(back, 0) == doctest::Approx(2.9));
  CHECK(coeff1(back, 1) == doctest::Approx(1.0).epsilon(1e-13));
  for (int k = 2; k <= 5; ++k) CHECK(std::abs(coeff1(back, k)) < 1e-12);
  // acos(cos t) = t on (0, pi)
  const RJet u = RJet::variable(s, 0, 1.1);
  const RJet ac = acos(cos(u));
  CHECK(coeff1(ac, 0) == doctest::Approx(1.1));
  CHECK(coeff1(ac, 1) == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 2; k <= 5; ++k) CHECK(std::abs(coeff1(ac, k)) < 1e-11);
}

TEST_CASE("sinc_sqrt and cos_sqrt agree across the series/closed-form switch") {
  const JetSpace& s = JetSpace::get(1, 6);
  for (double u0 : {0.0, 0.5, 3.99, 4.01, 7.0}) {
    const RJet u = RJet::variable(s, 0, u0);
    const RJet a = sinc_sqrt(u);
    const RJet c = cos_sqrt(u);
    // Compare against the composition with a shifted square: v = (w)^2 with w near sqrt(u0).
    if (u0 > 0.1) {
      const RJet w = sqrt(u);
      const RJet a2 = sin(w) / w;
      const RJet c2 = cos(w);
      for (int k = 0; k <= 6; ++k) {
        CHECK(coeff1(a, k) == doctest::Approx(coeff1(a2, k)).epsilon(1e-10).scale(1e-3));
        CHECK(coeff1(c, k) == doctest::Approx(coeff1(c2, k)).epsilon(1e-10).scale(1e-3));
      }
    } else {
      // Power series at zero: sin(sqrt u)/sqrt u = sum (-u)^j / (2j+1)!
      double fact = 1.0;
      for (int j = 0; j <= 6; ++j) {
        if (j > 0) fact *= (2.0 * j) * (2.0 * j + 1);
        CHECK(coeff1(a, j) == doctest::Approx(((j % 2) ? -1.0 : 1.0) / fact).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("multivariate product and quotient") {
  const JetSpace& s = JetSpace::get(2, 5);
  const RJet x = RJet::variable(s, 0, 0.3);
  const RJet y = RJet::variable(s, 1, -0.2);
  const RJet f = exp(x * y) / (1.0 + x * x);
  // d^2 f / dx dy at (x0, y0), computed by hand:
  // f = e^{xy} h(x), h = 1/(1+x^2); f_xy = (e^{xy}(1 + xy)) h + e^{xy} y h'... use partial form:
  // f_y = x e^{xy} h, f_xy = (e^{xy} + x y e^{xy}) h + x e^{xy} h'
  const double x0 = 0.3, y0 = -0.2;
  const double h = 1.0 / (1 + x0 * x0), hp = -2 * x0 * h * h, ex = std::exp(x0 * y0);
  const double fxy = (ex + x0 * y0 * ex) * h + x0 * ex * hp;
  const int idx[] = {0, 1};
  CHECK(f.partial(idx) == doctest::Approx(fxy).epsilon(1e-13));
}

TEST_CASE("composition substitutes jets") {
  const JetSpace& src = JetSpace::get(2, 4);
  const JetSpace& dst = JetSpace::get(1, 4);
  // f(a, b) = sin(a) * exp(b) expanded at (0.2, 0.1), then a = t, b = t^2 - t.
  const RJet a = RJet::variable(src, 0, 0.2), b = RJet::variable(src, 1, 0.1);
  const RJet f = sin(a) * exp(b);
  const RJet t = RJet::variable(dst, 0);
  const std::vector<RJet> subs = {t, t * t - t};
  const RJet g = compose(f, std::span<const RJet>(subs));
  // Direct evaluation: sin(0.2 + t) exp(0.1 + t^2 - t).
  const RJet direct = sin(t + 0.2) * exp(t * t - t + 0.1);
  for (int k = 0; k <= 4; ++k) CHECK(coeff1(g, k) == doctest::Approx(coeff1(direct, k)).epsilon(1e-13));
}

TEST_CASE("complex jets") {
  const JetSpace& s = JetSpace::get(1, 4);
  const RJet x = RJet::variable(s, 0, 0.5);
  const CJet e = expi(x);
  const CJet direct = exp(to_complex(x) * Complex(0.0, 1.0));
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(e[i] - direct[i]) < 1e-14);
  CHECK(std::abs(e.value() - std::exp(Complex(0.0, 0.5))) < 1e-15);
}

TEST_CASE("derivative and argument scaling") {
  const JetSpace& s = JetSpace::get(2, 4);
  const RJet x = RJet::variable(s, 0, 0.0), y = RJet::variable(s, 1, 0.0);
  const RJet f = x * x * y + 3.0 * y * y * y;
  const RJet fy = f.derivative(1);
  const int e1[] = {2, 0};
  const int e2[] = {0, 2};
  CHECK(fy.coefficient(e1) == doctest::Approx(1.0));
  CHECK(fy.coefficient(e2) == doctest::Approx(9.0));
  const RJet half = f.scaled_argument(0.5);
  const int e3[] = {2, 1};
  CHECK(half.coefficient(e3) == doctest::Approx(0.125));
}
