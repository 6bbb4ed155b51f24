#pragma once

// Phase space R x S^1: the Stratonovich-Weyl quantizer with a tangent-space
// cutoff, its mollifier limit (the discrete quantizer on Z hbar x S^1) and
// the associated trace identities.  Matrices are in the Fourier basis
// e^{i k theta} / sqrt(2 pi), |k| <= K, rows and columns ordered k = -K..K.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wue/quadrature.hpp"
#include "wue/symbols.hpp"

namespace wue {

enum class CutoffShape {
  /// chi^2 is an erf-smoothed box of centre (a+b)/2 and width (b-a)/13, glued
  /// to exact plateau and support with C-infinity steps.  Its Fourier
  /// transform decays like a Gaussian down to rounding level.
  erf_taper,
  /// chi = s(t), t = (|xi| - a)/(b - a), with the C-infinity step
  /// s = psi(1-t) / (psi(1-t) + psi(t)), psi(x) = e^{-1/x}.
  smooth_step,
};

/// Even cutoff chi(xi) equal to 1 for |xi| <= a and 0 for |xi| >= b.
struct CutoffFamily {
  double a = 0.3;
  double b = 2.7;
  CutoffShape shape = CutoffShape::erf_taper;

  /// Member j of the ladder a_j = pi/2 - 2^{-j}, b_j = pi/2 - 2^{-j-1}
  /// converging to the indicator of ]-pi/2, pi/2[.
  static CutoffFamily mollifier(int j, CutoffShape shape = CutoffShape::erf_taper);

  /// Throws DomainError unless 0 < a < b < pi.
  void validate() const;
  double chi(double xi) const;
  double chi_squared(double xi) const;
};

CutoffShape parse_cutoff_shape(std::string_view name);
std::string to_string(CutoffShape shape);

/// int chi^2(xi) e^{-beta xi^2} cos(omega xi) dxi over [-b, b].
IntegralEstimate cutoff_transform(const CutoffFamily& chi, double omega, double beta, double tolerance);

/// (1/pi) e^{i(k'-k)theta} int chi^2 e^{i(k+k'-2p/hbar) xi} dxi.  K <= 64.
QuantizerMatrix quantizer_matrix_cyl(double p, double theta, const CutoffFamily& chi, int truncation,
                                     const QuantizationContext& ctx);

/// Sum of the diagonal of the |k| <= K quantizer, computed as the single
/// Dirichlet-kernel integral (1/pi) int chi^2 cos(2 p xi/hbar) sin((2K+1)xi)/sin(xi),
/// so K is not limited.
double trace_cyl(double p, double theta, const CutoffFamily& chi, int truncation, const QuantizationContext& ctx);

/// Matrix of a differential operator on the circle in the same basis.
Eigen::MatrixXcd circle_operator_matrix(const CovariantOperator& d, int truncation, const QuantizationContext& ctx);

struct ReproductionResult {
  Complex trace;
  Complex expected;
  double residual = 0.0;
};

/// |Tr{Omega(p, theta) W(X p^m)} - X(theta) p^m| with the Weyl image on S^1.
/// Quadrature tolerances are tightened by K^m so the truncation error is
/// what remains.
ReproductionResult polynomial_reproduction_check(const TensorField& x, int m, double p, double theta,
                                                 const CutoffFamily& chi, int truncation,
                                                 const QuantizationContext& ctx);

/// Tr{Omega(p, theta) Omega(p', theta')} through truncated matrices.
Complex pair_trace_cyl(double p, double theta, double p2, double theta2, const CutoffFamily& chi, int truncation,
                       const QuantizationContext& ctx);

/// Smooth test function g(p') t(theta') with g Gaussian.  t must be
/// 2 pi-periodic; its Fourier coefficients are taken by the trapezoid rule.
struct Smearing {
  double p0 = 0.0;
  double sigma = 0.5;
  std::function<double(double)> t;

  /// t(theta) = exp(kappa (cos(theta - theta0) - 1)).
  static Smearing von_mises(double p0, double sigma, double theta0, double kappa);
  double g(double p) const;
  /// (1/2pi) int t(theta) e^{-i l theta} for |l| <= max_harmonic.
  std::vector<Complex> fourier(int max_harmonic) const;
};

/// int dp' dtheta' g(p') t(theta') Tr{Omega(p, theta) Omega(p', theta')}.
Complex smeared_pair_trace_cyl(double p, double theta, const CutoffFamily& chi, int truncation, const Smearing& s,
                               const QuantizationContext& ctx);

/// Smeared value of the delta model 2 pi hbar delta(p-p') delta(theta-theta').
double delta_model(double p, double theta, const Smearing& s, const QuantizationContext& ctx);

// --- discrete quantizer ---------------------------------------------------------

/// int_{-pi/2}^{pi/2} e^{i m xi} dxi: pi for m = 0, 2 sin(m pi/2)/m otherwise.
double indicator_transform(int m);

/// (1/pi) e^{i(k'-k)theta} I(k + k' - 2n), exact.
QuantizerMatrix discrete_quantizer(int n, double theta, int truncation);

/// Max-entry distance between quantizer_matrix_cyl(n hbar, theta, chi_j) and
/// discrete_quantizer(n, theta) along j = first_j .. first_j + steps - 1.
std::vector<double> discrete_limit_check(int n, double theta, int truncation, int first_j, int steps,
                                         const QuantizationContext& ctx, CutoffShape shape = CutoffShape::erf_taper);

Complex discrete_pair_trace(int n, int n2, double theta, double theta2, int truncation);

/// int dtheta' t(theta') Tr{Omega(n, theta) Omega(n', theta')}.
Complex smeared_discrete_pair_trace(int n, int n2, double theta, int truncation, const std::function<double(double)>& t);

struct DiscreteQuantization {
  Eigen::MatrixXcd values;
  /// Set when the momentum cap is below K or f(+-cap hbar, .) has not decayed.
  std::vector<std::string> warnings;
};

/// sum_{|n| <= cap} int dtheta/(2pi) f(n hbar, theta) Omega(n, theta).
DiscreteQuantization discrete_quantize(const std::function<Complex(double, double)>& f, int cap, int truncation,
                                       const QuantizationContext& ctx);

}  // namespace wue
