#include "wue/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wue {

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  GaussHermite r;
  r.nodes.assign(static_cast<std::size_t>(n), 0.0);
  r.weights.assign(static_cast<std::size_t>(n), 0.0);
  r.scaled_weights.assign(static_cast<std::size_t>(n), 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  // Newton iteration on the normalized Hermite functions psi_n (Gaussian
  // factor included), which stay O(1) on the whole node range.  Initial guesses follow the classical
  // asymptotic placement of the largest roots.
  double z = 0.0;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * r.nodes[0];
    else if (i == 3) z = 1.91 * z - 0.91 * r.nodes[1];
    else z = 2.0 * z - r.nodes[static_cast<std::size_t>(i - 2)];
    double prev = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4 * std::exp(-0.5 * z * z), p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      prev = p2;
      // psi_n' = sqrt(2n) psi_{n-1} - z psi_n
      const double dpsi = std::sqrt(2.0 * n) * p2 - z * p1;
      const double z1 = z;
      z = z1 - p1 / dpsi;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    const double ws = 1.0 / (n * prev * prev);
    const double w = ws * std::exp(-z * z);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = z;
    r.nodes[hi] = -z;
    r.weights[lo] = r.weights[hi] = w;
    r.scaled_weights[lo] = r.scaled_weights[hi] = ws;
  }
  return r;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule r;
  r.nodes.assign(static_cast<std::size_t>(n), Point(1));
  r.weights.assign(static_cast<std::size_t>(n), 0.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo][0] = mid - half * z;
    r.nodes[hi][0] = mid + half * z;
    r.weights[lo] = r.weights[hi] = 2.0 * half / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

QuadratureRule periodic_trapezoid(int n, double a, double period) {
  QuadratureRule r;
  for (int i = 0; i < n; ++i) {
    Point p(1);
    p[0] = a + period * i / n;
    r.nodes.push_back(p);
    r.weights.push_back(period / n);
  }
  return r;
}

IntegralEstimate integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tolerance,
                                    int max_depth) {
  IntegralEstimate e;
  if (a == b) return e;
  double err = 0.0, l1 = 0.0;
  e.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), tolerance, &err, &l1);
  // boost reports the error relative to the L1 norm.
  e.error = err * l1;
  return e;
}

}  // namespace wue
