#pragma once

#include <functional>
#include <vector>

#include "wue/fields.hpp"

namespace wue {

struct QuadratureRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for weight e^{-x^2}.  `scaled_weights` hold
/// w_i e^{x_i^2}, i.e. the weights for integrating an unweighted function
/// on the real line; they are computed without overflow.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;
};
GaussHermite gauss_hermite(int n);

/// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Trapezoid rule with n nodes for a periodic integrand on [a, a + period).
QuadratureRule periodic_trapezoid(int n, double a, double period);

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) integration on [a, b].
IntegralEstimate integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tolerance,
                                    int max_depth = 30);

}  // namespace wue
