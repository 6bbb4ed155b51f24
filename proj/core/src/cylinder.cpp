#include "wue/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wue/error.hpp"
#include "wue/wue_curved.hpp"

namespace wue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxTruncation = 64;
// Integrals are never requested below this; rounding dominates there.
constexpr double kToleranceFloor = 1e-15;

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double step01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double u = psi(t), v = psi(1.0 - t);
  return u / (u + v);
}

void check_truncation(int k, const char* where) {
  if (k < 0 || k > kMaxTruncation)
    throw DomainError(std::string(where) + ": truncation K must lie in [0, 64], got " + std::to_string(k));
}

/// Composite 20-point Gauss-Legendre on [a, b], starting from panels about
/// half a period of `freq` wide and doubling the panel count until two
/// successive sums agree.  Integrands here are smooth but oscillatory, where
/// bisection-driven rules chase rounding noise.
IntegralEstimate integrate_panels(const std::function<double(double)>& f, double a, double b, double freq,
                                  double tolerance) {
  IntegralEstimate out;
  if (b <= a) return out;
  static const QuadratureRule ref = gauss_legendre(20, -1.0, 1.0);
  auto composite = [&](int panels, double& l1) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    l1 = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double mid = a + (i + 0.5) * h;
      for (std::size_t j = 0; j < ref.weights.size(); ++j) {
        const double v = ref.weights[j] * f(mid + 0.5 * h * ref.nodes[j][0]);
        sum += v;
        l1 += std::abs(v);
      }
    }
    return 0.5 * h * sum;
  };
  int panels = std::max(4, static_cast<int>(std::ceil((b - a) * std::max(freq, 1.0) / kPi)));
  double l1 = 0.0;
  double prev = composite(panels, l1);
  for (int round = 0; round < 10; ++round) {
    panels *= 2;
    const double next = composite(panels, l1);
    out.value = next;
    out.error = std::abs(next - prev);
    if (out.error <= tolerance * std::max(1.0, 0.5 * (b - a) / panels * l1)) break;
    prev = next;
  }
  return out;
}

void check_estimate(const IntegralEstimate& e, double tolerance, const char* where) {
  if (!std::isfinite(e.value) || e.error > 1e3 * tolerance + 1e-13)
    throw AccuracyError(std::string(where) + ": adaptive quadrature did not reach the tolerance", e.error);
}

/// I(m - shift) for m = -2K .. 2K, stored at m + 2K.
std::vector<double> transform_table(const CutoffFamily& chi, int k, double shift, double beta, double tolerance,
                                    const char* where) {
  std::vector<double> out(static_cast<std::size_t>(4 * k + 1));
  for (int m = -2 * k; m <= 2 * k; ++m) {
    const auto e = cutoff_transform(chi, m - shift, beta, tolerance);
    check_estimate(e, tolerance, where);
    out[static_cast<std::size_t>(m + 2 * k)] = e.value;
  }
  return out;
}

double tolerance_of(const QuantizationContext& ctx) { return std::max(ctx.quadrature_tolerance, kToleranceFloor); }

}  // namespace

// --- cutoffs ------------------------------------------------------------------------

CutoffFamily CutoffFamily::mollifier(int j, CutoffShape shape) {
  if (j < 0) throw DomainError("mollifier ladder index must be non-negative");
  return {kPi / 2 - std::ldexp(1.0, -j), kPi / 2 - std::ldexp(1.0, -j - 1), shape};
}

void CutoffFamily::validate() const {
  if (!(a > 0.0 && a < b && b < kPi))
    throw DomainError("cutoff needs 0 < a < b < pi, got a = " + std::to_string(a) + ", b = " + std::to_string(b));
}

double CutoffFamily::chi_squared(double xi) const {
  const double r = std::abs(xi);
  if (r <= a) return 1.0;
  if (r >= b) return 0.0;
  if (shape == CutoffShape::smooth_step) {
    const double c = 1.0 - step01((r - a) / (b - a));
    return c * c;
  }
  const double w = b - a, c = 0.5 * (a + b), s = w / 13.0, glue = w / 24.0;
  // 1 - box, accurate where it is tiny.
  const double gap = 0.5 * (std::erfc((c - r) / s) + std::erfc((r + c) / s));
  const double inner = step01((r - a) / glue);
  const double outer = 1.0 - step01((r - (b - glue)) / glue);
  return outer * (1.0 - inner * gap);
}

double CutoffFamily::chi(double xi) const {
  if (shape == CutoffShape::smooth_step) {
    const double r = std::abs(xi);
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    return 1.0 - step01((r - a) / (b - a));
  }
  return std::sqrt(chi_squared(xi));
}

CutoffShape parse_cutoff_shape(std::string_view name) {
  if (name == "erf-taper") return CutoffShape::erf_taper;
  if (name == "smooth-step") return CutoffShape::smooth_step;
  throw ConfigError("unknown cutoff shape '" + std::string(name) + "' (expected erf-taper or smooth-step)");
}

std::string to_string(CutoffShape shape) { return shape == CutoffShape::erf_taper ? "erf-taper" : "smooth-step"; }

IntegralEstimate cutoff_transform(const CutoffFamily& chi, double omega, double beta, double tolerance) {
  chi.validate();
  IntegralEstimate plateau;
  if (beta == 0.0) {
    plateau.value = std::abs(omega) < 1e-300 ? 2.0 * chi.a : 2.0 * std::sin(omega * chi.a) / omega;
  } else {
    plateau = integrate_panels([&](double x) { return std::exp(-beta * x * x) * std::cos(omega * x); }, 0.0, chi.a,
                               std::abs(omega), tolerance);
    plateau.value *= 2.0;
    plateau.error *= 2.0;
  }
  auto edge = integrate_panels(
      [&](double x) { return chi.chi_squared(x) * std::exp(-beta * x * x) * std::cos(omega * x); }, chi.a, chi.b,
      std::abs(omega), tolerance);
  return {plateau.value + 2.0 * edge.value, plateau.error + 2.0 * edge.error};
}

// --- continuous quantizer ---------------------------------------------------------

QuantizerMatrix quantizer_matrix_cyl(double p, double theta, const CutoffFamily& chi, int truncation,
                                     const QuantizationContext& ctx) {
  check_truncation(truncation, "quantizer_matrix_cyl");
  chi.validate();
  const int k = truncation, size = 2 * k + 1;
  const auto table = transform_table(chi, k, 2.0 * p / ctx.hbar, 0.0, tolerance_of(ctx), "quantizer_matrix_cyl");
  QuantizerMatrix out;
  out.values.resize(size, size);
  out.basis = "fourier";
  for (int i = 0; i < size; ++i) {
    out.labels.push_back(i - k);
    for (int j = 0; j < size; ++j) {
      const int ki = i - k, kj = j - k;
      out.values(i, j) = std::polar(table[static_cast<std::size_t>(ki + kj + 2 * k)] / kPi, (kj - ki) * theta);
    }
  }
  return out;
}

double trace_cyl(double p, double /*theta*/, const CutoffFamily& chi, int truncation, const QuantizationContext& ctx) {
  chi.validate();
  if (truncation < 0) throw DomainError("trace_cyl: truncation must be non-negative");
  const double n = 2.0 * truncation + 1.0, w = 2.0 * p / ctx.hbar;
  auto kernel = [n](double x) { return std::abs(x) < 1e-8 ? n : std::sin(n * x) / std::sin(x); };
  const double tol = tolerance_of(ctx);
  const double freq = n + std::abs(w);
  const auto plateau = integrate_panels([&](double x) { return std::cos(w * x) * kernel(x); }, 0.0, chi.a, freq, tol);
  const auto edge = integrate_panels([&](double x) { return chi.chi_squared(x) * std::cos(w * x) * kernel(x); }, chi.a,
                                     chi.b, freq, tol);
  check_estimate({0.0, plateau.error + edge.error}, tol * std::max(1.0, std::log(n)), "trace_cyl");
  return 2.0 * (plateau.value + edge.value) / kPi;
}

Eigen::MatrixXcd circle_operator_matrix(const CovariantOperator& d, int truncation, const QuantizationContext& ctx) {
  return operator_matrix(circle(), d, FourierBasis(truncation), ctx).values;
}

ReproductionResult polynomial_reproduction_check(const TensorField& x, int m, double p, double theta,
                                                 const CutoffFamily& chi, int truncation,
                                                 const QuantizationContext& ctx) {
  if (m < 0 || m > kMaxDegree) throw UnsupportedOrder("polynomial_reproduction_check: degree must lie in [0, 4]");
  if (x.rank() != m || x.dim() != 1) throw std::invalid_argument("polynomial_reproduction_check: X must be a rank-m field on S^1");
  const ManifoldModel s1 = circle();
  MomentumPolynomial f(1);
  f.add(m, x);
  const CovariantOperator d = wue_weyl_image({s1, f}, ctx);

  // |D_{k'k}| grows like (hbar K)^m; scale the per-entry tolerance down so the
  // quadrature error stays below ctx.quadrature_tolerance after the sum.
  QuantizationContext tight = ctx;
  const double growth = (2.0 * truncation + 1.0) * std::max(1.0, std::pow(ctx.hbar * truncation, m));
  tight.quadrature_tolerance = std::max(ctx.quadrature_tolerance / growth, kToleranceFloor);
  const auto omega = quantizer_matrix_cyl(p, theta, chi, truncation, tight);
  const Eigen::MatrixXcd dm = circle_operator_matrix(d, truncation, ctx);

  Point q(1);
  q[0] = theta;
  ReproductionResult r;
  r.trace = (omega.values * dm).trace();
  r.expected = x.at(q)[0] * std::pow(p, m);
  r.residual = std::abs(r.trace - r.expected);
  return r;
}

Complex pair_trace_cyl(double p, double theta, double p2, double theta2, const CutoffFamily& chi, int truncation,
                       const QuantizationContext& ctx) {
  const auto a = quantizer_matrix_cyl(p, theta, chi, truncation, ctx);
  const auto b = quantizer_matrix_cyl(p2, theta2, chi, truncation, ctx);
  return (a.values * b.values).trace();
}

Smearing Smearing::von_mises(double p0, double sigma, double theta0, double kappa) {
  Smearing s;
  s.p0 = p0;
  s.sigma = sigma;
  s.t = [theta0, kappa](double th) { return std::exp(kappa * (std::cos(th - theta0) - 1.0)); };
  return s;
}

double Smearing::g(double p) const {
  const double z = (p - p0) / sigma;
  return std::exp(-0.5 * z * z);
}

std::vector<Complex> Smearing::fourier(int max_harmonic) const {
  if (!t) throw std::invalid_argument("Smearing: no angular test function");
  const int nodes = std::max(512, 8 * max_harmonic + 64);
  std::vector<double> samples(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) samples[static_cast<std::size_t>(j)] = t(2.0 * kPi * j / nodes);
  std::vector<Complex> out(static_cast<std::size_t>(2 * max_harmonic + 1));
  for (int l = -max_harmonic; l <= max_harmonic; ++l) {
    Complex c = 0.0;
    for (int j = 0; j < nodes; ++j) c += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -l * 2.0 * kPi * j / nodes);
    out[static_cast<std::size_t>(l + max_harmonic)] = c / static_cast<double>(nodes);
  }
  return out;
}

namespace {

/// (2/pi) sum_{k,k'} e^{i(k'-k)theta} t^(k'-k) A(k+k') B(k+k'), with A and B
/// tabulated on m = -2K .. 2K.
Complex smeared_sum(double theta, int k, const std::vector<Complex>& that, const std::vector<double>& a,
                    const std::vector<double>& b) {
  Complex total = 0.0;
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) {
      const auto m = static_cast<std::size_t>(i + j + 2 * k);
      total += std::polar(1.0, (j - i) * theta) * that[static_cast<std::size_t>(j - i + 2 * k)] * a[m] * b[m];
    }
  return 2.0 / kPi * total;
}

}  // namespace

Complex smeared_pair_trace_cyl(double p, double theta, const CutoffFamily& chi, int truncation, const Smearing& s,
                               const QuantizationContext& ctx) {
  check_truncation(truncation, "smeared_pair_trace_cyl");
  const int k = truncation;
  const double tol = tolerance_of(ctx);
  const auto a = transform_table(chi, k, 2.0 * p / ctx.hbar, 0.0, tol, "smeared_pair_trace_cyl");
  const double beta = 2.0 * s.sigma * s.sigma / (ctx.hbar * ctx.hbar);
  auto b = transform_table(chi, k, 2.0 * s.p0 / ctx.hbar, beta, tol, "smeared_pair_trace_cyl");
  for (auto& v : b) v *= s.sigma * std::sqrt(2.0 * kPi);
  return smeared_sum(theta, k, s.fourier(2 * k), a, b);
}

double delta_model(double p, double theta, const Smearing& s, const QuantizationContext& ctx) {
  return 2.0 * kPi * ctx.hbar * s.g(p) * s.t(theta);
}

// --- discrete quantizer ---------------------------------------------------------------

double indicator_transform(int m) {
  if (m == 0) return kPi;
  // sin(m pi/2) is 0, 1 or -1; avoid rounding in std::sin.
  const int r = ((m % 4) + 4) % 4;
  const double s = r == 1 ? 1.0 : (r == 3 ? -1.0 : 0.0);
  return 2.0 * s / m;
}

QuantizerMatrix discrete_quantizer(int n, double theta, int truncation) {
  if (truncation < 0) throw DomainError("discrete_quantizer: truncation must be non-negative");
  const int k = truncation, size = 2 * k + 1;
  QuantizerMatrix out;
  out.values.resize(size, size);
  out.basis = "fourier";
  for (int i = 0; i < size; ++i) {
    out.labels.push_back(i - k);
    for (int j = 0; j < size; ++j) {
      const int ki = i - k, kj = j - k;
      out.values(i, j) = std::polar(indicator_transform(ki + kj - 2 * n) / kPi, (kj - ki) * theta);
    }
  }
  return out;
}

std::vector<double> discrete_limit_check(int n, double theta, int truncation, int first_j, int steps,
                                         const QuantizationContext& ctx, CutoffShape shape) {
  const auto target = discrete_quantizer(n, theta, truncation).values;
  std::vector<double> errors;
  for (int j = first_j; j < first_j + steps; ++j) {
    const auto m = quantizer_matrix_cyl(n * ctx.hbar, theta, CutoffFamily::mollifier(j, shape), truncation, ctx);
    errors.push_back((m.values - target).cwiseAbs().maxCoeff());
  }
  return errors;
}

Complex discrete_pair_trace(int n, int n2, double theta, double theta2, int truncation) {
  const auto a = discrete_quantizer(n, theta, truncation).values;
  const auto b = discrete_quantizer(n2, theta2, truncation).values;
  return (a * b).trace();
}

Complex smeared_discrete_pair_trace(int n, int n2, double theta, int truncation,
                                    const std::function<double(double)>& t) {
  if (truncation < 0) throw DomainError("smeared_discrete_pair_trace: truncation must be non-negative");
  const int k = truncation;
  std::vector<double> a, b;
  for (int m = -2 * k; m <= 2 * k; ++m) {
    a.push_back(indicator_transform(m - 2 * n));
    b.push_back(indicator_transform(m - 2 * n2));
  }
  Smearing s;
  s.t = t;
  return smeared_sum(theta, k, s.fourier(2 * k), a, b);
}

DiscreteQuantization discrete_quantize(const std::function<Complex(double, double)>& f, int cap, int truncation,
                                       const QuantizationContext& ctx) {
  if (cap < 0 || truncation < 0) throw DomainError("discrete_quantize: cap and truncation must be non-negative");
  const int k = truncation, size = 2 * k + 1;

  // fhat[n][l] = (1/2pi) int f(n hbar, theta) e^{-i l theta}, |l| <= 2K, by
  // the trapezoid rule, checked against twice as many nodes.
  auto coefficients = [&](int nodes) {
    std::vector<std::vector<Complex>> out;
    for (int n = -cap; n <= cap; ++n) {
      std::vector<Complex> samples(static_cast<std::size_t>(nodes));
      for (int j = 0; j < nodes; ++j) samples[static_cast<std::size_t>(j)] = f(n * ctx.hbar, 2.0 * kPi * j / nodes);
      std::vector<Complex> row;
      for (int l = -2 * k; l <= 2 * k; ++l) {
        Complex c = 0.0;
        for (int j = 0; j < nodes; ++j) c += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -l * 2.0 * kPi * j / nodes);
        row.push_back(c / static_cast<double>(nodes));
      }
      out.push_back(std::move(row));
    }
    return out;
  };
  const int nodes = std::max(64, 8 * k + 16);
  const auto coarse = coefficients(nodes), fine = coefficients(2 * nodes);
  double diff = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < fine.size(); ++i)
    for (std::size_t l = 0; l < fine[i].size(); ++l) {
      diff = std::max(diff, std::abs(fine[i][l] - coarse[i][l]));
      scale = std::max(scale, std::abs(fine[i][l]));
    }
  if (diff > ctx.quadrature_tolerance * scale)
    throw AccuracyError("discrete_quantize: angular quadrature not converged", diff);

  DiscreteQuantization out;
  out.values = Eigen::MatrixXcd::Zero(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      const int ki = i - k, kj = j - k;
      Complex v = 0.0;
      for (int n = -cap; n <= cap; ++n) {
        const double w = indicator_transform(ki + kj - 2 * n);
        if (w != 0.0) v += w * fine[static_cast<std::size_t>(n + cap)][static_cast<std::size_t>(ki - kj + 2 * k)];
      }
      out.values(i, j) = v / kPi;
    }

  if (cap < k) out.warnings.push_back("momentum cap " + std::to_string(cap) + " is below the truncation K = " + std::to_string(k));
  // Beyond the cap only the angular modes l != 0 still reach |k| <= K: the
  // l = 0 weight I(2k - 2n) vanishes for n != k.
  double edge = 0.0;
  for (const int n : {-cap, cap}) {
    const auto& row = fine[static_cast<std::size_t>(n + cap)];
    for (std::size_t l = 0; l < row.size(); ++l)
      if (l != static_cast<std::size_t>(2 * k)) edge = std::max(edge, std::abs(row[l]));
  }
  if (edge > 1e-8 * scale)
    out.warnings.push_back("angular modes of f(n hbar, theta) have not decayed at |n| = " + std::to_string(cap) +
                           "; off-diagonal entries carry a truncation error of order " + std::to_string(edge));
  return out;
}

}  // namespace wue
