#pragma once

// Weyl calculus on R^{2n}: images of momentum polynomials under Weyl,
// standard and general A-orderings, their inverses, and the matrix of the
// Stratonovich-Weyl quantizer in the Hermite basis.

#include <cstdint>

#include "wue/symbols.hpp"

namespace wue {

/// Exact rational number in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// 2^{-k} binom(m, k): weight of the k-fold divergence term in the Weyl
/// image of a degree-m monomial.
Rational weyl_coefficient(int m, int k);

/// binom(k, j) 2^{-j}: weight of div^j C_k in the Weyl symbol of C_k d^k.
Rational weyl_symbol_coefficient(int k, int j);

/// (hbar/i)^m sum_k 2^{-k} binom(m,k) (d_a1..d_ak X^{a1..am}) d_a(k+1)..d_am.
CovariantOperator weyl_image_flat(const MomentumPolynomial& f, const QuantizationContext& ctx);

/// (hbar/i)^m X^{a1..am} d_a1 .. d_am.
CovariantOperator standard_image_flat(const MomentumPolynomial& f, const QuantizationContext& ctx);

/// Weyl image of A(Delta) f.
CovariantOperator a_image_flat(const OrderingScheme& a, const MomentumPolynomial& f, const QuantizationContext& ctx);

/// Symbol f with a_image_flat(a, f) = d.  Throws InversionError if a
/// coefficient tensor of d is not symmetric at the probe point.
MomentumPolynomial dequantize_symbol_flat(const OrderingScheme& a, const CovariantOperator& d,
                                          const QuantizationContext& ctx, const Point& probe);

/// Value of dequantize_symbol_flat at (p, x).
Complex dequantize_flat(const OrderingScheme& a, const CovariantOperator& d, std::span<const double> p, const Point& x,
                        const QuantizationContext& ctx);

struct FlatQuantizerSpec {
  double p = 0.0;
  double x = 0.0;
  /// Number of Hermite functions h_0 .. h_{K-1}.
  int truncation = 8;
  /// Gauss-Hermite nodes of the coarse rule; 0 means 4K.  The result is
  /// compared with a rule of twice the size.
  int nodes = 0;
};

/// <h_j | Omega(p, x) | h_k> = 2 int dxi e^{-2ip xi/hbar} h_j(x - xi) h_k(x + xi)
/// for n = 1.
QuantizerMatrix quantizer_matrix_flat(const FlatQuantizerSpec& spec, const QuantizationContext& ctx);

/// Plain partial traces of the Hermite-basis quantizer oscillate (at the
/// origin the diagonal is 2(-1)^k).  The trace is therefore reported as the
/// Cesaro mean of the partial traces S_1 .. S_K.
Complex cesaro_trace(const Eigen::MatrixXcd& m);

}  // namespace wue
