#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wue/error.hpp"
#include "wue/geometry.hpp"

using namespace wue;

namespace {

constexpr double kPi = std::numbers::pi;

Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

// Closed-form derivatives of sin(s)/s with s^2 = h_ab xi^a xi^b, from
// sin(s)/s = 1 - s^2/6 + s^4/120 - ...
double sinc_jet2(const Eigen::Matrix2d& h, int a, int b) { return -h(a, b) / 3.0; }
double sinc_jet4(const Eigen::Matrix2d& h, int a, int b, int c, int d) {
  return (h(a, b) * h(c, d) + h(a, c) * h(b, d) + h(a, d) * h(b, c)) / 15.0;
}

}  // namespace

TEST_CASE("builtin model construction and parsing") {
  CHECK(make_model("euclidean:3").dim() == 3);
  CHECK(make_model("circle").dim() == 1);
  CHECK(make_model("sphere:2").dim() == 2);
  CHECK(make_model("polar-plane").is_flat());
  CHECK_THROWS_AS(make_model("torus"), DomainError);
  CHECK_THROWS_AS(make_model("sphere:abc"), DomainError);
  CHECK_THROWS_AS(make_model("euclidean:1.5"), DomainError);
}

TEST_CASE("sphere christoffel symbols") {
  const auto s = sphere(1.0);
  const Point q = pt(0.7, 0.4);
  const auto g = christoffel(s, q);
  CHECK(g.at({0, 1, 1}) == doctest::Approx(-std::sin(0.7) * std::cos(0.7)).epsilon(1e-14));
  CHECK(g.at({1, 0, 1}) == doctest::Approx(std::cos(0.7) / std::sin(0.7)).epsilon(1e-14));
  CHECK(g.at({1, 1, 0}) == doctest::Approx(std::cos(0.7) / std::sin(0.7)).epsilon(1e-14));
  CHECK(std::abs(g.at({0, 0, 0})) < 1e-15);
}

TEST_CASE("ricci tensor of the round sphere equals the metric over a^2") {
  for (double a : {1.0, 2.0, 0.5}) {
    const auto s = sphere(a);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(0.3, kPi - 0.3), ph(-kPi, kPi);
    for (int i = 0; i < 10; ++i) {
      const Point q = pt(th(rng), ph(rng));
      const auto r = ricci(s, q);
      const Eigen::MatrixXd g = s.metric(q);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(r.at({x, y}) == doctest::Approx(g(x, y) / (a * a)).epsilon(1e-12).scale(1.0));
      CHECK(scalar_curvature(s, q) == doctest::Approx(2.0 / (a * a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("flat models have vanishing curvature") {
  const auto p = polar_plane();
  const auto r = ricci(p, pt(1.3, 0.2));
  for (const auto& v : r.data()) CHECK(std::abs(v) < 1e-13);
  const auto g = christoffel(p, pt(1.3, 0.2));
  CHECK(g.at({0, 1, 1}) == doctest::Approx(-1.3));
  CHECK(g.at({1, 0, 1}) == doctest::Approx(1.0 / 1.3));
}

TEST_CASE("chart guards") {
  const auto s = sphere(1.0);
  CHECK_THROWS_AS(s.check_chart(pt(0.05, 0.0)), DomainError);
  CHECK_THROWS_AS(s.check_chart(pt(kPi - 0.05, 0.0)), DomainError);
  CHECK_NOTHROW(s.check_chart(pt(0.5, 0.0)));
  CHECK_THROWS_AS(polar_plane().check_chart(pt(0.01, 0.0)), DomainError);
  try {
    s.check_chart(pt(0.01, 0.0));
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
  CHECK_THROWS_AS(exp_map(s, pt(1.0, 0.0), pt(3.5, 0.0)), DomainError);
  CHECK_THROWS_AS(exp_map(circle(), Point::Constant(1, 0.0), Point::Constant(1, 3.2)), DomainError);
}

TEST_CASE("closed-form exponential maps agree with the geodesic integrator") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<ManifoldModel> models = {euclidean(2), circle(), sphere(1.0), sphere(2.0), polar_plane()};
  for (const auto& m : models) {
    int accepted = 0;
    while (accepted < 20) {
      Point q(m.dim()), xi(m.dim());
      for (int i = 0; i < m.dim(); ++i) {
        q[i] = u(rng);
        xi[i] = u(rng);
      }
      if (m.name().rfind("sphere", 0) == 0) q[0] = 1.2 + 0.6 * u(rng);
      if (m.name() == "polar-plane") q[0] = 1.5 + 0.5 * u(rng);
      const double bound = std::min(m.injectivity_radius(q), 1e6);
      const double norm = std::sqrt(xi.dot(m.metric(q) * xi));
      const double limit = std::isfinite(m.injectivity_radius(q)) ? 0.4 * bound : 1.0;
      xi *= limit * std::abs(u(rng)) / norm;
      // Keep the integrated path clear of the sphere poles.
      bool clear = true;
      if (m.name().rfind("sphere", 0) == 0)
        for (double t = 0.0; t <= 1.0; t += 0.05) {
          const double th = exp_map(m, q, xi * std::max(t, 1e-9))[0];
          clear = clear && th > 0.3 && th < kPi - 0.3;
        }
      if (!clear) continue;
      ++accepted;
      const Point a = exp_map(m, q, xi);
      const Point b = m.wrap(geodesic_integrate(m, q, xi, 256));
      Point d = a - b;
      for (int i = 0; i < m.dim(); ++i)
        if (m.coordinates()[static_cast<std::size_t>(i)].period) d[i] = std::remainder(d[i], 2 * kPi);
      CHECK(d.norm() < 1e-8);
    }
  }
}

TEST_CASE("volume density jets on spheres") {
  for (double a : {1.0, 2.0}) {
    const auto s = sphere(a);
    const Point q = pt(1.1, 0.3);
    const auto table = sqrt_g_jet(s, q, 4);
    // In normal coordinates at q the volume ratio is sin(s)/s with
    // s^2 = (xi^T g xi) / a^2.
    Eigen::Matrix2d h = s.metric(q) / (a * a);
    CHECK(table.coefficients[0][0] == doctest::Approx(1.0));
    for (const auto& v : table.coefficients[1].data()) CHECK(std::abs(v) < 1e-14);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) CHECK(table.coefficients[2].at({x, y}) == doctest::Approx(sinc_jet2(h, x, y)).epsilon(1e-12).scale(1.0));
    for (const auto& v : table.coefficients[3].data()) CHECK(std::abs(v) < 1e-12);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
          for (int w = 0; w < 2; ++w)
            CHECK(table.coefficients[4].at({x, y, z, w}) == doctest::Approx(sinc_jet4(h, x, y, z, w)).epsilon(1e-11).scale(1.0));
    // Order-2 jet equals -R/3.
    const auto r = ricci(s, q);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) CHECK(table.coefficients[2].at({x, y}) == doctest::Approx(-r.at({x, y}) / 3.0).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(sqrt_g_jet(sphere(1.0), pt(1.0, 0.0), 5), UnsupportedOrder);
  CHECK_THROWS_AS(sqrt_g_jet(sphere(1.0), pt(0.02, 0.0), 2), DomainError);
}

TEST_CASE("volume jets from the integrated geodesic flow") {
  const auto s = sphere(1.0).without_analytic_exp();
  const Point q = pt(1.1, 0.3);
  const auto table = sqrt_g_jet(s, q, 2);
  const Eigen::Matrix2d h = sphere(1.0).metric(q);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) CHECK(std::abs(table.coefficients[2].at({x, y}) - sinc_jet2(h, x, y)) < 1e-5);
}

TEST_CASE("volume jet field matches pointwise jets and their base-point derivatives") {
  const auto s = sphere(1.0);
  const TensorField j2 = volume_jet_field(s, 2, VolumeJetConvention::direct);
  const TensorField j2r = volume_jet_field(s, 2, VolumeJetConvention::reciprocal);
  const Point q = pt(0.9, -0.4);
  const auto local = j2.expand(q, 2);
  const auto local_r = j2r.expand(q, 2);
  const auto ric = ricci(s, q);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      CHECK(std::abs(local.at({x, y}).value() + ric.at({x, y}) / 3.0) < 1e-12);
      CHECK(std::abs(local_r.at({x, y}).value() - ric.at({x, y}) / 3.0) < 1e-12);
    }
  // d/dtheta of the (phi, phi) entry: -R_phiphi/3 = -sin^2(theta)/3.
  const int e[] = {1, 0};
  CHECK(std::abs(local.at({1, 1}).coefficient(e) + 2 * std::sin(0.9) * std::cos(0.9) / 3.0) < 1e-12);
  // Odd orders vanish identically.
  const auto j1 = volume_jet_field(s, 1, VolumeJetConvention::direct).expand(q, 2);
  for (const auto& c : j1.data()) CHECK(c.norm_inf() < 1e-12);
}

TEST_CASE("symmetrized covariant derivatives of l = 1 harmonics") {
  // For psi = cos(theta) on the unit sphere: Hess psi = -psi g and the
  // symmetrized third derivative is -g_(ab d_c) psi.
  const auto s = sphere(1.0);
  const ScalarField psi = TensorField::scalar(2, [](std::span<const RJet> x) { return cos(x[0]); });
  const Point q = pt(1.2, 0.5);
  const Eigen::MatrixXd g = s.metric(q);
  const auto h = sym_cov_deriv(s, psi, 2, q);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(std::abs(h.at({a, b}) - (-std::cos(1.2) * g(a, b))) < 1e-13);
  const auto t = sym_cov_deriv(s, psi, 3, q);
  const double dpsi[2] = {-std::sin(1.2), 0.0};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const double expected = -(g(a, b) * dpsi[c] + g(a, c) * dpsi[b] + g(b, c) * dpsi[a]) / 3.0;
        CHECK(std::abs(t.at({a, b, c}) - expected) < 1e-13);
      }
  CHECK_THROWS_AS(sym_cov_deriv(s, psi, 5, q), UnsupportedOrder);
}

TEST_CASE("pullback jets equal symmetrized covariant derivatives") {
  const auto s = sphere(1.0);
  const ScalarField psi = TensorField::scalar(2, [](std::span<const RJet> x) {
    return sin(x[0]) * cos(x[1]) + 0.3 * cos(x[0]) * cos(x[0]) + 0.1 * sin(2.0 * x[1]) * sin(x[0]);
  });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.5, kPi - 0.5), ph(-kPi, kPi);
  for (int i = 0; i < 5; ++i) {
    const Point q = pt(th(rng), ph(rng));
    for (int k = 0; k <= 3; ++k) {
      const auto a = sym_cov_deriv(s, psi, k, q);
      const auto b = pullback_jet(s, psi, q, k);
      const auto c = pullback_jet(s, psi, q, k, JetMethod::finite_difference);
      for (std::size_t f = 0; f < a.size(); ++f) {
        CHECK(std::abs(a[f] - b[f]) < 1e-12);
        CHECK(std::abs(b[f] - c[f]) < 1e-6);
      }
    }
  }
}
