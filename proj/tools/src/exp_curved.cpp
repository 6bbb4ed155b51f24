// curved-defect and point-transform.

#include <cmath>

#include "experiment_defs.hpp"
#include "wue/error.hpp"
#include "wue/wue_curved.hpp"

namespace wue::harness::detail {

namespace {

constexpr const char* kGoldenAnchor = "curved images: degree one, degree two with X R / 12, kinetic operator";
constexpr const char* kDefectAnchor = "trace-axiom defect (hbar^2/3) X^{ab} R_ab of the kinetic symbol";
constexpr const char* kGeometryAnchor = "geometry: Ricci sign, volume jet -R/3, pullback jets vs covariant derivatives";
constexpr const char* kPointAnchor = "point-transformation identity for Delta; Delta(p_r) = -hbar/r";

/// A chart point away from every singularity of the model.
Point interior_point(const ManifoldModel& m) {
  if (m.name().starts_with("sphere")) return make_point({1.2, 0.4});
  if (m.name() == "polar-plane") return make_point({1.3, 0.4});
  Point q = Point::Constant(m.dim(), 0.3);
  return q;
}

std::vector<double> momentum(int dim, double scale) {
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = scale * (1.0 - 0.35 * i);
  return p;
}

/// Radius of "sphere:a"; 0 for other models.
double sphere_radius(const ManifoldModel& m) {
  if (!m.name().starts_with("sphere")) return 0.0;
  return std::sqrt(m.metric(make_point({kPi / 2, 0.0}))(0, 0));
}

void run_curved_defect(const ExperimentConfig& cfg, RunContext& rc) {
  const QuantizationContext ctx = context_of(cfg);
  const double h2 = ctx.hbar * ctx.hbar;
  const ManifoldModel model = make_model(cfg.string("manifold"));
  if (model.dim() != 2) throw ConfigError("curved-defect needs a two-dimensional manifold, got '" + model.name() + "'");
  std::vector<Point> pts;
  for (const auto& v : cfg.at("points").get<std::vector<std::vector<double>>>()) {
    if (v.size() != 2) throw ConfigError("points: every point needs two coordinates");
    pts.push_back(make_point(v));
  }
  if (pts.empty()) throw ConfigError("points must not be empty");
  const Complex mi(0, -ctx.hbar);

  // Degree one: (hbar/i)(X nabla + div X / 2).
  const double deg1 = rc.guarded("degree-one-image", [&] {
    MomentumPolynomial f(2);
    const auto x = expression_tensor_field(model, cfg.at("fields.degree_one").get<std::vector<std::string>>(), 1);
    f.add(1, x);
    CovariantOperator expected(2);
    expected.add(1, x.scaled(mi));
    expected.add(0, divergence_field(model, x).scaled(mi / 2.0));
    return max_coefficient_difference(wue_weyl_image({model, f}, ctx), expected, pts);
  });
  rc.record("degree-one-image", kGoldenAnchor, deg1, 0.0, Provenance::published_result,
            "(hbar/i)(X^a nabla_a + nabla_a X^a / 2)", cfg.tolerance("degree_one"), Comparison::at_most);

  // Degree two: (hbar/i)^2 (X nabla nabla + div X nabla + divdiv X / 4 + X R / 12).
  double top = 0.0, ricci_coeff = 0.0, ricci_err = 0.0;
  bool curved = false;
  rc.guarded("degree-two-image", [&] {
    const auto x = expression_tensor_field(model, cfg.at("fields.degree_two").get<std::vector<std::string>>(), 2);
    MomentumPolynomial f(2);
    f.add(2, x);
    const auto d = wue_weyl_image({model, f}, ctx);
    const Complex pre = mi * mi;
    const auto div = divergence_field(model, x);
    const auto divdiv = divergence_field(model, div);
    const auto xr = contract_leading(x, ricci_field(model));
    for (const auto& q : pts) {
      const auto c2 = d.coefficient(2).at(q), x2 = x.at(q);
      for (std::size_t i = 0; i < c2.size(); ++i) top = std::max(top, std::abs(c2[i] - pre * x2[i]));
      const auto c1 = d.coefficient(1).at(q), d1 = div.at(q);
      for (std::size_t i = 0; i < c1.size(); ++i) top = std::max(top, std::abs(c1[i] - pre * d1[i]));
      const Complex curv = pre * xr.at(q)[0];
      if (std::abs(curv) < 1e-8) continue;
      curved = true;
      const Complex c = (d.coefficient(0).at(q)[0] - pre * 0.25 * divdiv.at(q)[0]) / curv;
      if (std::abs(c - 1.0 / 12.0) >= ricci_err) {
        ricci_err = std::abs(c - 1.0 / 12.0);
        ricci_coeff = c.real();
      }
    }
  });
  rc.record("degree-two-derivative-terms", kGoldenAnchor, top, 0.0, Provenance::published_result,
            "second- and first-order coefficients (hbar/i)^2 X and (hbar/i)^2 div X", cfg.tolerance("degree_two"),
            Comparison::at_most);
  if (curved)
    rc.record("ricci-coefficient", kGoldenAnchor, ricci_coeff, 1.0 / 12.0, Provenance::published_result,
              "coefficient of (hbar/i)^2 X^{ab} R_ab in the zeroth-order term", cfg.tolerance("ricci_coefficient"),
              Comparison::abs_error);
  else
    rc.warn("X^{ab} R_ab vanishes at every point; the Ricci coefficient is not identifiable on this model");

  // Kinetic symbol maps to (hbar/i)^2 X nabla nabla.
  const TensorField xk = named_field(model, cfg.string("symbol"), 2);
  const double kin = rc.guarded("kinetic-image", [&] {
    CovariantOperator expected(2);
    expected.add(2, xk.scaled(mi * mi));
    return max_coefficient_difference(wue_weyl_image({model, kinetic_symbol(model, xk, ctx)}, ctx), expected, pts);
  });
  rc.record("kinetic-image", kGoldenAnchor, kin, 0.0, Provenance::published_result,
            "image of the kinetic symbol is (hbar/i)^2 X^{ab} nabla_a nabla_b", cfg.tolerance("kinetic"),
            Comparison::at_most);

  // Defect scan along the p grid.
  const Point q0 = make_point(cfg.numbers("defect.base_point"));
  const auto grid = cfg.numbers("defect.p_grid");
  const auto dir = cfg.numbers("defect.p_direction");
  if (dir.size() != 2 || grid.empty()) throw ConfigError("defect.p_direction needs two entries and p_grid at least one");
  TraceOptions opts;
  opts.convention = cfg.string("defect.convention") == "direct"        ? VolumeJetConvention::direct
                    : cfg.string("defect.convention") == "reciprocal" ? VolumeJetConvention::reciprocal
                    : throw ConfigError("defect.convention must be reciprocal or direct");
  std::vector<std::pair<std::vector<double>, Point>> samples;
  for (double k : grid) samples.push_back({{k * ctx.hbar * dir[0], k * ctx.hbar * dir[1]}, q0});
  const DefectScan scan = rc.guarded("defect-value", [&] { return defect_scan(model, xk, samples, ctx, opts); });
  Series ds{"defect_vs_p", {"p1", "p2", "defect_re", "defect_im", "curvature"}, {}};
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : scan.samples) {
    ds.rows.push_back({s.p[0], s.p[1], s.defect.real(), s.defect.imag(), s.curvature});
    lo = std::min(lo, s.defect.real());
    hi = std::max(hi, s.defect.real());
  }
  rc.add_series(std::move(ds));
  const DefectSample& first = scan.samples.front();
  const double reference = h2 * first.curvature / 3.0;
  if (std::abs(reference) > 0.0)
    rc.record("defect-value", kDefectAnchor, first.defect.real(), reference, Provenance::published_result,
              "(hbar^2/3) X^{ab} R_ab; 2 hbar^2/3 for X = g on the unit sphere", cfg.tolerance("defect_relative"),
              Comparison::rel_error);
  else
    rc.record("defect-value", kDefectAnchor, std::abs(first.defect), 0.0, Provenance::published_result,
              "no defect where X^{ab} R_ab = 0", cfg.tolerance("flat_defect"), Comparison::at_most);
  rc.record("defect-imaginary-part", kDefectAnchor, scan.max_imaginary, 0.0, Provenance::exact_identity,
            "the defect of a real symbol is real", cfg.tolerance("p_constancy"), Comparison::at_most);
  rc.record("defect-constant-in-p", kDefectAnchor, hi - lo, 0.0, Provenance::published_result,
            "spread of the defect over the p grid", cfg.tolerance("p_constancy"), Comparison::at_most);

  // Radius scaling on spheres.
  const auto radii = cfg.numbers("defect.radii");
  Series rs{"defect_vs_radius", {"radius", "defect", "coefficient"}, {}};
  double d0 = 0.0, a0 = 0.0;
  for (double a : radii) {
    const std::string name = "defect-radius-" + std::to_string(a).substr(0, 4);
    const auto s = rc.guarded(name, [&] {
      const auto sp = sphere(a);
      return defect_scan(sp, inverse_metric_field(sp), {samples.front()}, ctx, opts);
    });
    const double d = s.samples[0].defect.real();
    rs.rows.push_back({a, d, s.coefficient});
    if (a0 == 0.0) {
      d0 = d;
      a0 = a;
      continue;
    }
    rc.record(name + "-scaling", kDefectAnchor, d / d0, (a0 / a) * (a0 / a), Provenance::published_result,
              "defect(a) / defect(a0) = (a0/a)^2 for X = g on spheres", cfg.tolerance("radius_scaling"),
              Comparison::rel_error);
  }
  rc.add_series(std::move(rs));

  // Flat models carry no defect.
  double flat = 0.0;
  for (const auto& name : cfg.at("defect.flat_models").get<std::vector<std::string>>()) {
    flat = std::max(flat, rc.guarded("flat-no-defect", [&] {
      const auto m = make_model(name);
      if (!m.is_flat()) throw ConfigError("defect.flat_models: '" + name + "' is not flat");
      const auto s = defect_scan(m, inverse_metric_field(m), {{momentum(m.dim(), 1.3 * ctx.hbar), interior_point(m)}},
                                 ctx, opts);
      return std::abs(s.samples[0].defect);
    }));
  }
  rc.record("flat-no-defect", kDefectAnchor, flat, 0.0, Provenance::published_result,
            "zero defect on flat models, Cartesian or curvilinear", cfg.tolerance("flat_defect"), Comparison::at_most);

  const double em = rc.guarded("emmrich-defect", [&] {
    TraceOptions e = opts;
    e.measure = MeasureVariant::emmrich;
    return std::abs(defect_scan(model, xk, {samples.front()}, ctx, e).samples[0].defect) / h2;
  });
  rc.record("emmrich-defect", kDefectAnchor, em, cfg.number("defect.emmrich_floor"), Provenance::published_result,
            "the sqrt(g(q)) tangent measure leaves a defect; |defect| / hbar^2", 0.0, Comparison::exceeds);

  // Geometry substrate.
  const double a = sphere_radius(model);
  double ric = 0.0, jet = 0.0, pull = 0.0;
  const ScalarField psi = named_field(model, "custom:" + cfg.string("geometry.function"), 0);
  const int kmax = cfg.integer("geometry.max_order");
  rc.guarded("geometry", [&] {
    for (const auto& q : pts) {
      const auto r = ricci(model, q);
      const Eigen::MatrixXd g = model.metric(q);
      const double scale = a > 0.0 ? 1.0 / (a * a) : 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ric = std::max(ric, std::abs(r.at({i, j}) - scale * g(i, j)));
      const auto table = sqrt_g_jet(model, q, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          jet = std::max(jet, std::abs(table.coefficients[2].at({i, j}) + r.at({i, j}) / 3.0));
      for (int k = 0; k <= kmax; ++k) {
        const auto lhs = pullback_jet(model, psi, q, k);
        const auto rhs = sym_cov_deriv(model, psi, k, q);
        for (std::size_t f = 0; f < lhs.size(); ++f) pull = std::max(pull, std::abs(lhs[f] - rhs[f]));
      }
    }
  });
  if (a > 0.0 || model.is_flat())
    rc.record("ricci-equals-metric", kGeometryAnchor, ric, 0.0, Provenance::published_result,
              "R_ab = g_ab / a^2 on the sphere of radius a (0 when flat), sign included", cfg.tolerance("ricci_metric"),
              Comparison::at_most);
  rc.record("volume-jet-order-two", kGeometryAnchor, jet, 0.0, Provenance::published_result,
            "second normal-coordinate derivative of sqrt(g) equals -R_ab/3", cfg.tolerance("density_jet"),
            Comparison::at_most);
  rc.record("pullback-vs-covariant", kGeometryAnchor, pull, 0.0, Provenance::independent_oracle,
            "d^k psi(exp_q xi) at xi = 0 equals the symmetrized nabla^k psi", cfg.tolerance("pullback"),
            Comparison::at_most);
}

void run_point_transform(const ExperimentConfig& cfg, RunContext& rc) {
  const QuantizationContext ctx = context_of(cfg);
  std::mt19937_64 rng(cfg.seed());
  const auto pol = polar_plane();
  MomentumPolynomial f(2);
  const auto comps = cfg.at("symbol").get<std::vector<std::vector<std::string>>>();
  for (std::size_t m = 0; m < comps.size(); ++m)
    if (!comps[m].empty()) f.add(static_cast<int>(m), expression_tensor_field(pol, comps[m], static_cast<int>(m)));
  std::uniform_real_distribution<double> rs(cfg.number("sampling.r_min"), cfg.number("sampling.r_max")),
      phis(-3.0, 3.0), ps(-2.0, 2.0);
  Series ser{"samples", {"r", "phi", "p_r", "p_phi", "polar_re", "polar_im", "cartesian_re", "cartesian_im"}, {}};
  double worst = 0.0;
  rc.guarded("polar-vs-cartesian", [&] {
    for (int i = 0; i < cfg.integer("sampling.count"); ++i) {
      const Point q = make_point({rs(rng), phis(rng)});
      const double p[] = {ps(rng), ps(rng)};
      const auto s = point_transform_sample(f, p, q, ctx);
      worst = std::max(worst, std::abs(s.polar - s.cartesian));
      ser.rows.push_back({q[0], q[1], p[0], p[1], s.polar.real(), s.polar.imag(), s.cartesian.real(), s.cartesian.imag()});
    }
  });
  rc.record("polar-vs-cartesian", kPointAnchor, worst, 0.0, Provenance::independent_oracle,
            "Delta from the polar connection vs -hbar d^2/dp_i dx^i after the point transformation",
            cfg.tolerance("agreement"), Comparison::at_most);
  rc.add_series(std::move(ser));

  MomentumPolynomial pr(2);
  pr.add(1, expression_tensor_field(pol, {"1", "0"}, 1));
  const double p[] = {1.0, 0.0};
  for (double r : cfg.numbers("radial_momentum.radii")) {
    const std::string name = "delta-p_r-at-r=" + std::to_string(r).substr(0, 4);
    const auto s = rc.guarded(name, [&] { return point_transform_sample(pr, p, make_point({r, 0.7}), ctx); });
    rc.record(name, kPointAnchor, s.cartesian.real(), -ctx.hbar / r, Provenance::published_result,
              "Delta(p_r) = -hbar / r (Cartesian side)", cfg.tolerance("worked_value"), Comparison::abs_error);
    rc.record(name + "-polar", kPointAnchor, s.polar.real(), -ctx.hbar / r, Provenance::published_result,
              "Delta(p_r) = -hbar / r (polar side)", cfg.tolerance("worked_value"), Comparison::abs_error);
  }
}

}  // namespace

ExperimentInfo curved_defect() {
  Json d;
  d["manifold"] = "sphere:1";
  d["symbol"] = "inverse-metric";
  d["points"] = {{0.7, 0.3}, {1.4, -2.2}, {2.2, 1.0}};
  d["fields"] = {{"degree_one", {"cos(theta)*sin(phi)", "sin(theta)"}},
                 {"degree_two", {"1 + cos(theta)^2", "sin(phi)*sin(theta)", "sin(phi)*sin(theta)", "2 + cos(phi)"}}};
  d["defect"] = {{"base_point", {1.2, 0.4}},
                 {"p_direction", {1.0, 0.3}},
                 {"p_grid", {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0}},
                 {"radii", {1.0, 2.0}},
                 {"flat_models", {"euclidean:2", "euclidean:3", "polar-plane", "circle"}},
                 {"convention", "reciprocal"},
                 {"emmrich_floor", 0.1}};
  d["geometry"] = {{"function", "sin(theta)*cos(phi) + 0.3*cos(theta)^2 + 0.1*sin(2*phi)*sin(theta)"}, {"max_order", 3}};
  d["tolerances"] = {{"degree_one", 1e-10},    {"degree_two", 1e-10},     {"ricci_coefficient", 1e-6},
                     {"kinetic", 1e-8},        {"defect_relative", 1e-4}, {"p_constancy", 1e-6},
                     {"radius_scaling", 1e-3}, {"flat_defect", 1e-8},     {"ricci_metric", 1e-10},
                     {"density_jet", 1e-5},    {"pullback", 1e-5}};
  return {"curved-defect",
          kDefectAnchor,
          "Curved images of degree one and two, the kinetic operator, the trace-axiom defect of the kinetic symbol "
          "(p grid, radius scaling, flat models, Emmrich measure) and the geometry it rests on",
          make_schema("curved-defect", d,
                      {{"manifold", "two-dimensional model: sphere:a, polar-plane or euclidean:2"},
                       {"symbol", "X of the kinetic symbol: inverse-metric, constant, cos-theta or custom:<expr>"},
                       {"points", "chart points (coordinate order of the model) for the coefficient checks"},
                       {"fields", "components of the degree-one and degree-two test fields, symmetrized"},
                       {"defect.p_grid", "momenta k hbar p_direction at which the defect is sampled"},
                       {"defect.radii", "sphere radii of the 1/a^2 scaling check; the first is the reference"},
                       {"defect.convention", "volume-jet convention: reciprocal (+1/12) or direct (-1/12)"},
                       {"defect.emmrich_floor", "|defect| / hbar^2 must exceed this under the Emmrich measure"},
                       {"geometry.function", "scalar test function for the pullback-jet check"},
                       {"geometry.max_order", "highest derivative order compared (at most 4)"}}),
          run_curved_defect};
}

ExperimentInfo point_transform() {
  Json d;
  d["symbol"] = {Json::array({"cos(phi)*r"}),
                 Json::array({"r^2", "sin(phi)"}),
                 Json::array({"1 + r", "cos(phi)", "cos(phi)", "r*sin(phi)"}),
                 Json::array({"r", "0", "0", "1", "0", "1", "1", "cos(phi)"})};
  d["sampling"] = {{"count", 20}, {"r_min", 0.4}, {"r_max", 3.0}};
  d["radial_momentum"] = {{"radii", {0.5, 1.0, 2.0}}};
  d["tolerances"] = {{"agreement", 1e-6}, {"worked_value", 1e-8}};
  return {"point-transform",
          kPointAnchor,
          "Delta evaluated with the polar-chart connection against the Cartesian -hbar d^2/dp dx at random phase-space "
          "points, and the worked value Delta(p_r) = -hbar/r",
          make_schema("point-transform", d,
                      {{"symbol", "components per degree m = 0, 1, ... in (r, phi); an empty list skips a degree"},
                       {"sampling", "number of random (p, q) and the radial range"},
                       {"radial_momentum.radii", "radii of the worked value"}}),
          run_point_transform};
}

}  // namespace wue::harness::detail
