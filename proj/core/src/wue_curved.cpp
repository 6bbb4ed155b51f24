#include "wue/wue_curved.hpp"

#include <cmath>
#include <limits>

#include "wue/error.hpp"
#include "wue/flat_weyl.hpp"

namespace wue {

namespace {

Complex hbar_over_i(double hbar, int m) { return std::pow(Complex(0.0, -hbar), m); }

}  // namespace

TensorField tilde_field(const WueImageRequest& req, const TensorField& x, int k) {
  if (k == 0) return x;
  if (req.measure == MeasureVariant::emmrich || req.manifold.is_flat()) return TensorField::zero(x.rank() - k, x.dim());
  return symmetrized(contract_leading(x, volume_jet_field(req.manifold, k, req.convention)));
}

CovariantOperator wue_weyl_image(const WueImageRequest& req, const QuantizationContext& ctx) {
  const auto& f = req.symbol;
  if (f.dim() != req.manifold.dim()) throw std::invalid_argument("wue_weyl_image: symbol dimension differs from the manifold");
  CovariantOperator d(f.dim());
  for (int m : f.grades()) {
    const Complex pre = hbar_over_i(ctx.hbar, m);
    const TensorField x = f.coefficient(m);
    for (int k = 0; k <= m; ++k) {
      TensorField xt = tilde_field(req, x, k);
      if (xt.is_zero()) continue;
      for (int j = 0; j <= m - k; ++j) {
        if (j > 0) xt = symmetrized(divergence_field(req.manifold, xt));
        const double c = weyl_coefficient(m, k).value() * weyl_coefficient(m - k, j).value();
        d.add(m - k - j, xt.scaled(pre * c));
      }
    }
  }
  return d;
}

CovariantOperator wue_standard_image(const WueImageRequest& req, const QuantizationContext& ctx) {
  const auto& f = req.symbol;
  CovariantOperator d(f.dim());
  for (int m : f.grades()) {
    const Complex pre = hbar_over_i(ctx.hbar, m);
    for (int k = 0; k <= m; ++k) {
      const TensorField xt = tilde_field(req, f.coefficient(m), k);
      if (!xt.is_zero()) d.add(m - k, xt.scaled(pre * weyl_coefficient(m, k).value()));
    }
  }
  return d;
}

CovariantOperator wue_image(const WueImageRequest& req, const QuantizationContext& ctx) {
  if (req.ordering.is_weyl()) return wue_weyl_image(req, ctx);
  WueImageRequest r = req;
  r.symbol = ordering_transform(req.manifold, req.ordering, req.symbol, ctx);
  return wue_weyl_image(r, ctx);
}

// --- dequantization -----------------------------------------------------------

namespace {

/// All exponent vectors in n variables with total degree <= max, graded.
std::vector<std::vector<int>> multi_indices(int n, int max) {
  const JetSpace& s = JetSpace::get(n, max);
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto e = s.exponents(i);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

std::vector<int> as_index_list(const std::vector<int>& exps) {
  std::vector<int> idx;
  for (std::size_t v = 0; v < exps.size(); ++v)
    for (int r = 0; r < exps[v]; ++r) idx.push_back(static_cast<int>(v));
  return idx;
}

/// z^e / e! as a jet.
CJet scaled_monomial(const JetSpace& sp, const std::vector<int>& e, int order) {
  CJet j(sp, order);
  int deg = 0;
  for (int v : e) deg += v;
  if (deg > order) return j;
  double w = 1.0;
  for (int v : e)
    for (int r = 2; r <= v; ++r) w *= r;
  j[sp.index(e)] = 1.0 / w;
  return j;
}

}  // namespace

Complex dequantize_curved(const ManifoldModel& model, const CovariantOperator& d, std::span<const double> p,
                          const Point& q, const QuantizationContext& ctx, const TraceOptions& opts) {
  const int n = model.dim();
  if (d.dim() != n || static_cast<int>(p.size()) != n)
    throw std::invalid_argument("dequantize_curved: dimension mismatch");
  model.check_chart(q);
  const int order = d.order();
  if (order < 0) return 0.0;
  if (order > kMaxDegree) throw UnsupportedOrder("dequantize_curved: operator order above 4");

  // Normal-coordinate data of order L = 2N leaves N orders after N covariant
  // derivatives, which is what the final N-th u-derivatives consume.
  const int L = 2 * order;
  const NormalChart chart = normal_chart(model, q, L);
  const JetSpace& sp = chart.displacement[0].space();
  const JetMatrix dz_dx = inverse(chart.jacobian, n);
  const Tensor<RJet> gamma = christoffel_from_metric(chart.metric, n);

  // Coefficient tensors in normal coordinates.
  std::vector<std::pair<int, LocalTensor>> coeffs;
  for (int k : d.grades()) {
    const LocalTensor chart_local = d.coefficient(k).expand(q, order);
    LocalTensor t(k, n);
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = compose(chart_local[f], std::span<const RJet>(chart.displacement));
    for (int slot = 0; slot < k; ++slot) {
      LocalTensor u(k, n, CJet(sp, L));
      for (std::size_t f = 0; f < u.size(); ++f) {
        auto idx = unflatten(f, k, n);
        const int a = idx[static_cast<std::size_t>(slot)];
        for (int b = 0; b < n; ++b) {
          idx[static_cast<std::size_t>(slot)] = b;
          u[f].add_product(to_complex(dz_dx[static_cast<std::size_t>(a * n + b)]), t.at(idx));
        }
      }
      t = std::move(u);
    }
    coeffs.emplace_back(k, std::move(t));
  }

  // a^J from D(z^J / J!) = sum_{I <= J} a^I z^{J-I} / (J-I)!.
  const auto mis = multi_indices(n, order);
  std::vector<CJet> a;
  for (std::size_t ji = 0; ji < mis.size(); ++ji) {
    const auto& e = mis[ji];
    LocalTensor t(0, n);
    t[0] = scaled_monomial(sp, e, L);
    CJet dpsi(sp, L - order);
    for (int k = 0; k <= order; ++k) {
      for (const auto& [ck, c] : coeffs)
        if (ck == k)
          for (std::size_t f = 0; f < c.size(); ++f) dpsi.add_product(c[f], t[f]);
      if (k < order) t = covariant_gradient(t, gamma);
    }
    for (std::size_t ii = 0; ii < ji; ++ii) {
      const auto& i = mis[ii];
      std::vector<int> rest(e.size());
      bool below = true;
      for (std::size_t v = 0; v < e.size(); ++v) {
        rest[v] = e[v] - i[v];
        below = below && rest[v] >= 0;
      }
      if (!below) continue;
      dpsi -= a[ii] * scaled_monomial(sp, rest, L);
    }
    a.push_back(std::move(dpsi));
  }

  // Density and phase in u = 2 xi.
  RJet rho = chart.volume_ratio.truncated(order);
  if (opts.convention == VolumeJetConvention::reciprocal) rho = 1.0 / rho;
  RJet dens = 1.0 / rho.scaled_argument(-0.5);
  if (opts.measure == MeasureVariant::paper) dens = dens * rho.scaled_argument(0.5);
  RJet phase_arg(sp, order);
  for (int v = 0; v < n; ++v) phase_arg += RJet::variable(sp, v, 0.0, order) * (-p[static_cast<std::size_t>(v)] / ctx.hbar);
  const CJet kernel = to_complex(dens) * expi(phase_arg);

  Complex tr = 0.0;
  for (std::size_t ji = 0; ji < mis.size(); ++ji) {
    const auto idx = as_index_list(mis[ji]);
    const CJet term = kernel * a[ji].truncated(order).scaled_argument(0.5);
    const double sign = idx.size() % 2 == 0 ? 1.0 : -1.0;
    tr += sign * term.partial(idx);
  }
  return tr;
}

Complex axiom_defect(const WueImageRequest& req, std::span<const double> p, const Point& q,
                     const QuantizationContext& ctx) {
  const CovariantOperator d = wue_weyl_image(req, ctx);
  return eval_symbol(req.symbol, p, q) - dequantize_curved(req.manifold, d, p, q, ctx, {req.measure, req.convention});
}

MomentumPolynomial kinetic_symbol(const ManifoldModel& model, const TensorField& x, const QuantizationContext& ctx) {
  if (x.rank() != 2) throw std::invalid_argument("kinetic_symbol: coefficient must have rank 2");
  const double h = ctx.hbar;
  MomentumPolynomial f(model.dim());
  f.add(2, symmetrized(x));
  const TensorField div = divergence_field(model, x);
  f.add(1, div.scaled(Complex(0.0, h)));
  f.add(0, divergence_field(model, div).scaled(-h * h / 4.0));
  f.add(0, contract_leading(x, ricci_field(model)).scaled(h * h / 12.0));
  return f;
}

MomentumPolynomial kinetic_symbol(const ManifoldModel& model, const QuantizationContext& ctx) {
  return kinetic_symbol(model, inverse_metric_field(model), ctx);
}

DefectScan defect_scan(const ManifoldModel& model, const TensorField& x,
                       const std::vector<std::pair<std::vector<double>, Point>>& points, const QuantizationContext& ctx,
                       const TraceOptions& opts) {
  WueImageRequest req{model, kinetic_symbol(model, x, ctx)};
  req.measure = opts.measure;
  req.convention = opts.convention;
  const CovariantOperator image = wue_weyl_image(req, ctx);
  const TensorField xr = contract_leading(x, ricci_field(model));
  DefectScan scan;
  double num = 0.0, den = 0.0;
  for (const auto& [p, q] : points) {
    DefectSample s;
    s.p = p;
    s.q = q;
    s.defect = eval_symbol(req.symbol, p, q) - dequantize_curved(model, image, p, q, ctx, opts);
    s.curvature = xr.at(q)[0].real();
    const double basis = ctx.hbar * ctx.hbar * s.curvature;
    num += s.defect.real() * basis;
    den += basis * basis;
    scan.max_imaginary = std::max(scan.max_imaginary, std::abs(s.defect.imag()));
    scan.samples.push_back(std::move(s));
  }
  scan.coefficient = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : scan.samples) {
    const double fit = den > 0.0 ? scan.coefficient * ctx.hbar * ctx.hbar * s.curvature : 0.0;
    scan.fit_residual = std::max(scan.fit_residual, std::abs(s.defect - fit));
  }
  return scan;
}

}  // namespace wue
