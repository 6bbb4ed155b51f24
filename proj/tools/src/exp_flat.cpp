// flat-axioms and orderings.

#include <cmath>
#include <numeric>

#include "experiment_defs.hpp"
#include "wue/error.hpp"
#include "wue/flat_weyl.hpp"
#include "wue/wue_curved.hpp"

namespace wue::harness::detail {

namespace {

constexpr const char* kFlatAnchor = "flat Weyl image of momentum monomials; trace normalization of the quantizer";
constexpr const char* kOrderAnchor = "generalized orderings A(Delta): A = 1 is Weyl, standard image, hermiticity";

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// d^r/dx^r x^e.
double dpow(int e, int r, double x) {
  if (r > e) return 0.0;
  double c = 1;
  for (int i = 0; i < r; ++i) c *= e - i;
  return c * std::pow(x, e - r);
}

/// Coefficient of d^{m-r} in W(c x^a p^m) from the McCoy form
/// 2^{-a} sum_l binom(a,l) x^l P^m x^{a-l}, P = (hbar/i) d.
Complex mccoy_coefficient(double c, int a, int m, int r, double x, double hbar) {
  double s = 0;
  for (int l = 0; l <= a; ++l) s += binom(a, l) * std::pow(x, l) * binom(m, r) * dpow(a - l, r, x);
  return c * std::pow(Complex(0, -hbar), m) * s / std::pow(2.0, a);
}

/// binom(m,k) / 2^k in lowest terms from Pascal's triangle.
Rational pascal_weight(int m, int k) {
  if (k > m) return {0, 1};
  std::vector<std::int64_t> row{1};
  for (int i = 0; i < m; ++i) {
    std::vector<std::int64_t> next(row.size() + 1, 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j];
      next[j + 1] += row[j];
    }
    row = next;
  }
  std::int64_t num = row[static_cast<std::size_t>(k)], den = std::int64_t{1} << k;
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

void run_flat_axioms(const ExperimentConfig& cfg, RunContext& rc) {
  const QuantizationContext ctx = context_of(cfg);
  std::mt19937_64 rng(cfg.seed());

  int mismatches = 0;
  for (int m = 0; m <= kMaxDegree; ++m)
    for (int k = 0; k <= m + 1; ++k) mismatches += weyl_coefficient(m, k) == pascal_weight(m, k) ? 0 : 1;
  rc.record("weyl-coefficients-exact", kFlatAnchor, mismatches, 0, Provenance::independent_oracle,
            "binom(m,k)/2^k reduced from Pascal's triangle; count of mismatching rationals", 0.0, Comparison::at_most);

  // Random monomials c x^a p^m on the line against the McCoy symmetrization.
  const auto r1 = euclidean(1);
  const int count = cfg.integer("monomials.count");
  const int max_degree = cfg.integer("monomials.max_degree");
  const int max_power = cfg.integer("monomials.max_power");
  if (max_degree > 3 || max_degree < 0) throw ConfigError("monomials.max_degree must be in 0..3");
  std::uniform_int_distribution<int> deg(0, max_degree), pow_(0, max_power), num(-4, 4), den(1, 4);
  std::uniform_real_distribution<double> xs(-1.5, 1.5);
  double worst = 0.0;
  Series mono{"monomials", {"a", "m", "c", "x", "max_error"}, {}};
  rc.guarded("weyl-image-monomials", [&] {
    for (int i = 0; i < count; ++i) {
      const int a = pow_(rng), m = deg(rng);
      int n = num(rng);
      if (n == 0) n = 1;
      const double c = double(n) / den(rng);
      MomentumPolynomial f(1);
      f.add(m, named_field(r1, "custom:(" + std::to_string(c) + ")*x^" + std::to_string(a), m));
      const auto d = weyl_image_flat(f, ctx);
      // std::to_string rounds c to six digits; re-read it so the oracle uses the same value.
      const double cv = std::stod(std::to_string(c));
      const double x = xs(rng);
      Point q(1);
      q[0] = x;
      double err = 0.0;
      for (int r = 0; r <= m; ++r) {
        const Complex expected = mccoy_coefficient(cv, a, m, r, x, ctx.hbar);
        const Complex got = d.has(m - r) ? d.coefficient(m - r).at(q)[0] : Complex(0.0);
        err = std::max(err, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
      }
      worst = std::max(worst, err);
      mono.rows.push_back({double(a), double(m), cv, x, err});
    }
  });
  rc.record("weyl-image-monomials", kFlatAnchor, worst, 0.0, Provenance::independent_oracle,
            "McCoy symmetrization 2^-a sum_l binom(a,l) x^l P^m x^(a-l); max relative coefficient error",
            cfg.tolerance("coefficient"), Comparison::at_most);
  rc.add_series(std::move(mono));

  // Round trip on random polynomial symbols in two dimensions.
  const auto r2 = euclidean(2);
  const auto names = cfg.at("round_trip.orderings").get<std::vector<std::string>>();
  if (names.empty()) throw ConfigError("round_trip.orderings must not be empty");
  std::vector<OrderingScheme> schemes;
  for (const auto& n : names) schemes.push_back(OrderingScheme::preset(n, ctx.hbar));
  std::uniform_real_distribution<double> ps(-2.0, 2.0), qs(-1.0, 1.0);
  const int symbols = cfg.integer("round_trip.symbols");
  Series rt{"round_trip", {"symbol", "ordering", "value_re", "value_im", "error"}, {}};
  worst = 0.0;
  rc.guarded("round-trip", [&] {
    for (int i = 0; i < symbols; ++i) {
      const auto f = random_symbol(r2, cfg.integer("round_trip.max_degree"), rng);
      const std::size_t o = static_cast<std::size_t>(i) % schemes.size();
      const double p[] = {ps(rng), ps(rng)};
      const Point x = make_point({qs(rng), qs(rng)});
      const Complex expected = eval_symbol(f, p, x);
      const Complex got = dequantize_flat(schemes[o], a_image_flat(schemes[o], f, ctx), p, x, ctx);
      const double err = std::abs(got - expected);
      worst = std::max(worst, err);
      rt.rows.push_back({double(i), double(o), expected.real(), expected.imag(), err});
    }
  });
  rc.record("round-trip", kFlatAnchor, worst, 0.0, Provenance::exact_identity,
            "dequantize_flat(A, a_image_flat(A, f)) = f; max abs error over random symbols",
            cfg.tolerance("round_trip"), Comparison::at_most);
  rc.add_series(std::move(rt));

  // Quantizer matrix in the Hermite basis.
  FlatQuantizerSpec spec;
  spec.p = cfg.number("quantizer.p");
  spec.x = cfg.number("quantizer.x");
  const auto ladder = cfg.integers("quantizer.truncations");
  if (ladder.empty()) throw ConfigError("quantizer.truncations must not be empty");
  rc.note_truncation("hermite", ladder);
  Series tr{"trace_vs_K", {"K", "trace_re", "trace_im", "error", "hermiticity"}, {}};
  double herm = 0.0;
  std::vector<double> errors;
  rc.guarded("quantizer-trace", [&] {
    for (int k : ladder) {
      spec.truncation = k;
      const auto m = quantizer_matrix_flat(spec, ctx);
      const Complex t = cesaro_trace(m.values);
      const double h = hermiticity_defect(m.values);
      herm = std::max(herm, h);
      errors.push_back(std::abs(t - 1.0));
      tr.rows.push_back({double(k), t.real(), t.imag(), errors.back(), h});
    }
  });
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
  rc.record("quantizer-hermitian", kFlatAnchor, herm, 0.0, Provenance::exact_identity,
            "Omega(p,x) is self-adjoint; max |M - M^dagger| over the K ladder", cfg.tolerance("hermiticity"),
            Comparison::at_most);
  rc.record("trace-ladder-monotone", kFlatAnchor, decreasing ? 1.0 : 0.0, 1.0, Provenance::published_result,
            "Tr Omega = 1: the Cesaro trace error decreases strictly along the K ladder", 0.0, Comparison::holds);
  rc.record("trace-normalization", kFlatAnchor, errors.back(), 0.0, Provenance::published_result,
            "Tr Omega = 1; |Cesaro trace - 1| at the largest K", cfg.tolerance("trace"), Comparison::at_most);
  rc.add_series(std::move(tr));
}

void run_orderings(const ExperimentConfig& cfg, RunContext& rc) {
  const QuantizationContext ctx = context_of(cfg);
  std::mt19937_64 rng(cfg.seed());
  const auto r2 = euclidean(2);
  const std::vector<Point> pts = {make_point({0.3, -0.2}), make_point({-1.1, 0.9}), make_point({0.7, 0.5})};

  double weyl_diff = 0.0, std_diff = 0.0;
  rc.guarded("weyl-identity", [&] {
    for (int i = 0; i < cfg.integer("symbols.count"); ++i) {
      const auto f = random_symbol(r2, cfg.integer("symbols.max_degree"), rng);
      weyl_diff = std::max(weyl_diff,
                           max_coefficient_difference(a_image_flat(OrderingScheme::weyl(), f, ctx), weyl_image_flat(f, ctx), pts));
      std_diff = std::max(std_diff, max_coefficient_difference(a_image_flat(OrderingScheme::standard(), f, ctx),
                                                               standard_image_flat(f, ctx), pts));
    }
  });
  rc.record("weyl-identity", kOrderAnchor, weyl_diff, 0.0, Provenance::exact_identity,
            "a_image_flat with A = 1 equals weyl_image_flat bit for bit", 0.0, Comparison::at_most);
  rc.record("standard-image", kOrderAnchor, std_diff, 0.0, Provenance::published_result,
            "standard preset gives (hbar/i)^m X^{a1..am} d_a1..d_am", cfg.tolerance("standard_match"),
            Comparison::at_most);

  // Hermiticity of real-A images on the circle.
  const auto s1 = circle();
  const int k = cfg.integer("circle.truncation");
  rc.note_truncation("fourier", k);
  const FourierBasis basis(k);
  const auto coeffs = cfg.at("circle.coefficients").get<std::vector<std::string>>();
  const auto names = cfg.at("circle.orderings").get<std::vector<std::string>>();
  Series hs{"hermiticity", {"ordering", "coefficient", "degree", "defect"}, {}};
  double worst = 0.0;
  rc.guarded("real-orderings-hermitian", [&] {
    for (std::size_t o = 0; o < names.size(); ++o) {
      const auto a = OrderingScheme::preset(names[o], ctx.hbar);
      if (!a.has_real_coefficients())
        rc.warn("ordering '" + names[o] + "' has complex coefficients; its images need not be hermitian");
      for (std::size_t c = 0; c < coeffs.size(); ++c)
        for (int m = 0; m <= cfg.integer("circle.max_degree"); ++m) {
          MomentumPolynomial f(1);
          f.add(m, named_field(s1, coeffs[c], m));
          WueImageRequest req{s1, f};
          req.ordering = a;
          const double h = hermiticity_defect(operator_matrix(s1, wue_image(req, ctx), basis, ctx).values);
          worst = std::max(worst, h);
          hs.rows.push_back({double(o), double(c), double(m), h});
        }
    }
  });
  rc.record("real-orderings-hermitian", kOrderAnchor, worst, 0.0, Provenance::published_result,
            "real A maps real symbols to symmetric operators; max |M - M^dagger|", cfg.tolerance("hermiticity"),
            Comparison::at_most);
  rc.add_series(std::move(hs));

  const double defect = rc.guarded("standard-not-hermitian", [&] {
    MomentumPolynomial f(1);
    f.add(1, named_field(s1, cfg.string("nonhermitian.coefficient"), 1));
    WueImageRequest req{s1, f};
    req.ordering = OrderingScheme::standard();
    return hermiticity_defect(operator_matrix(s1, wue_image(req, ctx), basis, ctx).values);
  });
  rc.record("standard-not-hermitian", kOrderAnchor, defect, cfg.number("nonhermitian.floor"),
            Provenance::published_result, "X(theta) (hbar/i) d_theta is not symmetric for nonconstant X", 0.0,
            Comparison::exceeds);
}

}  // namespace

ExperimentInfo flat_axioms() {
  Json d;
  d["monomials"] = {{"count", 24}, {"max_degree", 3}, {"max_power", 3}};
  d["round_trip"] = {{"symbols", 20},
                     {"max_degree", 3},
                     {"orderings", {"weyl", "standard", "anti-standard", "symmetrized-standard", "standard-printed"}}};
  d["quantizer"] = {{"p", 0.3}, {"x", 0.2}, {"truncations", {4, 8, 16, 32}}};
  d["tolerances"] = {{"coefficient", 1e-12}, {"round_trip", 1e-12}, {"hermiticity", 1e-10}, {"trace", 0.05}};
  return {"flat-axioms",
          kFlatAnchor,
          "Weyl images of random monomials against the McCoy form, round trips through every ordering preset, "
          "and the Hermite-basis quantizer trace ladder",
          make_schema("flat-axioms", d,
                      {{"monomials", "random c x^a p^m on the line; degree m <= 3, power a <= max_power"},
                       {"round_trip", "random polynomial symbols on R^2 cycled through the listed orderings"},
                       {"quantizer", "phase-space point and Hermite truncations K of the trace ladder"},
                       {"quantizer.truncations", "K values; each must be at most 32"},
                       {"tolerances.trace", "bound on |Cesaro trace - 1| at the largest K"}}),
          run_flat_axioms};
}

ExperimentInfo orderings() {
  Json d;
  d["symbols"] = {{"count", 10}, {"max_degree", 3}};
  d["circle"] = {{"truncation", 16},
                 {"coefficients", {"cos-theta", "custom:sin(theta)^2 + 0.5", "constant"}},
                 {"max_degree", 3},
                 {"orderings", {"weyl", "symmetrized-standard"}}};
  d["nonhermitian"] = {{"coefficient", "cos-theta"}, {"floor", 1e-6}};
  d["tolerances"] = {{"standard_match", 1e-12}, {"hermiticity", 1e-9}, {"quadrature", 1e-10}};
  return {"orderings",
          kOrderAnchor,
          "A(Delta)-ordered images: A = 1 reproduces Weyl, the standard preset the standard image; real A gives "
          "hermitian matrices on the circle while the standard order does not",
          make_schema("orderings", d,
                      {{"symbols", "random polynomial symbols on R^2 for the flat identities"},
                       {"circle", "Fourier truncation K, coefficient names and real orderings for the hermiticity scan"},
                       {"circle.coefficients", "constant, cos-theta, inverse-metric or custom:<expr in theta>"},
                       {"nonhermitian", "coefficient X of the standard-ordered X(theta) p and the defect it must exceed"},
                       {"tolerances.quadrature", "accuracy of the Fourier matrix elements"}}),
          run_orderings};
}

}  // namespace wue::harness::detail
