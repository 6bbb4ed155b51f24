#include "wue/flat_weyl.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <numbers>

#include "wue/error.hpp"

namespace wue {

namespace {

using Q = boost::rational<std::int64_t>;

std::int64_t binomial(int n, int k) {
  return static_cast<std::int64_t>(std::llround(boost::math::binomial_coefficient<double>(unsigned(n), unsigned(k))));
}

Rational to_rational(const Q& q) { return {q.numerator(), q.denominator()}; }

/// i^e, exact.
Complex ipow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// j-fold divergence in Cartesian coordinates.
TensorField cartesian_divergence(const ManifoldModel& flat, TensorField x, int j) {
  for (int i = 0; i < j; ++i) x = divergence_field(flat, x);
  return x;
}

}  // namespace

Rational weyl_coefficient(int m, int k) {
  if (k < 0 || k > m) return {};
  return to_rational(Q(binomial(m, k), std::int64_t(1) << k));
}

Rational weyl_symbol_coefficient(int k, int j) { return weyl_coefficient(k, j); }

CovariantOperator weyl_image_flat(const MomentumPolynomial& f, const QuantizationContext& ctx) {
  const ManifoldModel flat = euclidean(f.dim());
  CovariantOperator d(f.dim());
  for (int m : f.grades()) {
    // (hbar/i)^m = hbar^m i^{-m}
    const Complex pre = std::pow(ctx.hbar, m) * ipow(-m);
    TensorField x = f.coefficient(m);
    for (int k = 0; k <= m; ++k) {
      if (k > 0) x = divergence_field(flat, x);
      d.add(m - k, x.scaled(pre * weyl_coefficient(m, k).value()));
    }
  }
  return d;
}

CovariantOperator standard_image_flat(const MomentumPolynomial& f, const QuantizationContext& ctx) {
  CovariantOperator d(f.dim());
  for (int m : f.grades()) d.add(m, f.coefficient(m).scaled(std::pow(ctx.hbar, m) * ipow(-m)));
  return d;
}

CovariantOperator a_image_flat(const OrderingScheme& a, const MomentumPolynomial& f, const QuantizationContext& ctx) {
  return weyl_image_flat(ordering_transform(euclidean(f.dim()), a, f, ctx), ctx);
}

MomentumPolynomial dequantize_symbol_flat(const OrderingScheme& a, const CovariantOperator& d,
                                          const QuantizationContext& ctx, const Point& probe) {
  const ManifoldModel flat = euclidean(d.dim());
  MomentumPolynomial w(d.dim());
  for (int k : d.grades()) {
    const TensorField c = d.coefficient(k);
    const auto at = c.at(probe);
    if (symmetry_defect(at) > 1e-12 * std::max(1.0, max_abs(at)))
      throw InversionError("operator coefficient of order " + std::to_string(k) +
                           " is not symmetric; it is not the image of a momentum polynomial");
    // Symbol of C d^k in standard form is (i/hbar)^k C p^k; exp(i hbar d_p d_x / 2)
    // turns it into the Weyl symbol.
    for (int j = 0; j <= k; ++j) {
      const Complex pre = ipow(k + j) * std::pow(ctx.hbar, j - k) * weyl_symbol_coefficient(k, j).value();
      w.add(k - j, cartesian_divergence(flat, c, j).scaled(pre));
    }
  }
  if (a.is_weyl()) return w;
  return ordering_transform(flat, a.inverse(), w, ctx);
}

Complex dequantize_flat(const OrderingScheme& a, const CovariantOperator& d, std::span<const double> p, const Point& x,
                        const QuantizationContext& ctx) {
  return eval_symbol(dequantize_symbol_flat(a, d, ctx, x), p, x);
}

QuantizerMatrix quantizer_matrix_flat(const FlatQuantizerSpec& spec, const QuantizationContext& ctx) {
  const int k = spec.truncation;
  if (k < 1) throw std::invalid_argument("quantizer_matrix_flat: truncation must be positive");
  const int coarse_nodes = spec.nodes > 0 ? spec.nodes : std::max(4 * k, 64);

  auto assemble = [&](int nodes) {
    const auto gh = gauss_hermite(nodes);
    // Columns: h_j(x - xi_i) and h_k(x + xi_i) at every node.
    Eigen::MatrixXd minus(nodes, k), plus(nodes, k);
    for (int i = 0; i < nodes; ++i) {
      const double xi = gh.nodes[static_cast<std::size_t>(i)];
      const double a = spec.x - xi, b = spec.x + xi;
      double pa = 0.0, pb = 0.0;
      double ca = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * a * a);
      double cb = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * b * b);
      for (int n = 0; n < k; ++n) {
        minus(i, n) = ca;
        plus(i, n) = cb;
        const double na = std::sqrt(2.0 / (n + 1)) * a * ca - std::sqrt(double(n) / (n + 1)) * pa;
        const double nb = std::sqrt(2.0 / (n + 1)) * b * cb - std::sqrt(double(n) / (n + 1)) * pb;
        pa = ca;
        pb = cb;
        ca = na;
        cb = nb;
      }
    }
    Eigen::VectorXcd w(nodes);
    for (int i = 0; i < nodes; ++i) {
      const double xi = gh.nodes[static_cast<std::size_t>(i)];
      w[i] = 2.0 * gh.scaled_weights[static_cast<std::size_t>(i)] * std::polar(1.0, -2.0 * spec.p * xi / ctx.hbar);
    }
    Eigen::MatrixXcd m = minus.cast<Complex>().transpose() * w.asDiagonal() * plus.cast<Complex>();
    return m;
  };

  const Eigen::MatrixXcd coarse = assemble(coarse_nodes);
  const Eigen::MatrixXcd fine = assemble(2 * coarse_nodes);
  const double diff = (fine - coarse).cwiseAbs().maxCoeff();
  if (diff > ctx.quadrature_tolerance * std::max(1.0, fine.cwiseAbs().maxCoeff()))
    throw AccuracyError("quantizer_matrix_flat: Gauss-Hermite quadrature not converged", diff);
  QuantizerMatrix out;
  out.values = fine;
  out.basis = "hermite";
  for (int n = 0; n < k; ++n) out.labels.push_back(n);
  return out;
}

Complex cesaro_trace(const Eigen::MatrixXcd& m) {
  Complex partial = 0.0, sum = 0.0;
  const auto n = std::min(m.rows(), m.cols());
  if (n == 0) return 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    partial += m(i, i);
    sum += partial;
  }
  return sum / static_cast<double>(n);
}

}  // namespace wue
