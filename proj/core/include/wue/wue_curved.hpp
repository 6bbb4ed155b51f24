#pragma once

// Weyl-Underhill-Emmrich quantization on a Riemannian configuration space:
// images of momentum polynomials, the dequantization trace Tr{Omega(p,q) D}
// and the resulting defect of the trace axiom.

#include <vector>

#include "wue/symbols.hpp"

namespace wue {

/// Tangent-space measure used by the quantizer: sqrt(g(xi)) dxi (`paper`)
/// or sqrt(g(q)) dxi (`emmrich`).
enum class MeasureVariant { paper, emmrich };

struct WueImageRequest {
  ManifoldModel manifold;
  MomentumPolynomial symbol;
  OrderingScheme ordering = OrderingScheme::weyl();
  MeasureVariant measure = MeasureVariant::paper;
  /// The Ricci term of the quadratic image carries +1/12 only with the
  /// reciprocal density jets; see VolumeJetConvention.
  VolumeJetConvention convention = VolumeJetConvention::reciprocal;
};

/// X~_k = X^{b1..bk a..} d^k rho / dxi^b1..dxi^bk at xi = 0 (rank m - k).
TensorField tilde_field(const WueImageRequest& req, const TensorField& x, int k);

/// (hbar/i)^m sum_k sum_j binom(m,k) binom(m-k,j) 2^{-(k+j)} (nabla^j X~_k) nabla^{m-k-j},
/// summed over the degrees of the symbol.  The ordering field is ignored.
CovariantOperator wue_weyl_image(const WueImageRequest& req, const QuantizationContext& ctx);

/// (hbar/i)^m sum_k 2^{-k} binom(m,k) X~_k nabla^{m-k}.
CovariantOperator wue_standard_image(const WueImageRequest& req, const QuantizationContext& ctx);

/// Weyl image of A(Delta) f for the requested ordering.
CovariantOperator wue_image(const WueImageRequest& req, const QuantizationContext& ctx);

struct TraceOptions {
  MeasureVariant measure = MeasureVariant::paper;
  VolumeJetConvention convention = VolumeJetConvention::reciprocal;
};

/// Tr{Omega(p, q) D}.  D is rewritten in Riemann normal coordinates z at q as
/// sum_I a^I(z) d^I; the quantizer kernel then gives
///   sum_I (-1)^|I| d_u^I [ dens(u) e^{-i p u / hbar} a^I(u/2) ] at u = 0,
/// with dens(u) = rho(u/2)/rho(-u/2) (paper) or 1/rho(-u/2) (emmrich).
/// Exact up to rounding for operators of order <= 4 on models with a
/// closed-form exponential map.
Complex dequantize_curved(const ManifoldModel& model, const CovariantOperator& d, std::span<const double> p,
                          const Point& q, const QuantizationContext& ctx, const TraceOptions& opts = {});

/// f(p, q) - Tr{Omega(p, q) wue_weyl_image(f)}.
Complex axiom_defect(const WueImageRequest& req, std::span<const double> p, const Point& q,
                     const QuantizationContext& ctx);

/// X pp + i hbar (nabla_a X^{ab}) p_b - (hbar^2/4) nabla nabla X + (hbar^2/12) X^{ab} R_ab;
/// its Weyl image is (hbar/i)^2 X^{ab} nabla_a nabla_b.
MomentumPolynomial kinetic_symbol(const ManifoldModel& model, const TensorField& x, const QuantizationContext& ctx);
/// Kinetic symbol with X = g^{-1}.
MomentumPolynomial kinetic_symbol(const ManifoldModel& model, const QuantizationContext& ctx);

struct DefectSample {
  std::vector<double> p;
  Point q;
  Complex defect;
  double curvature = 0.0;  // X^{ab} R_ab (q)
};

struct DefectScan {
  std::vector<DefectSample> samples;
  /// Least-squares c in defect = c hbar^2 X^{ab} R_ab (NaN if the curvature
  /// vanishes at every sample).
  double coefficient = 0.0;
  /// Largest |defect - c hbar^2 XR| over the samples.
  double fit_residual = 0.0;
  double max_imaginary = 0.0;
};

/// Axiom defect of the kinetic symbol built from x at every (p, q) pair.
DefectScan defect_scan(const ManifoldModel& model, const TensorField& x,
                       const std::vector<std::pair<std::vector<double>, Point>>& points, const QuantizationContext& ctx,
                       const TraceOptions& opts = {});

}  // namespace wue
