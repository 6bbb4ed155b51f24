#include "wue/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wue/error.hpp"

namespace wue {

namespace {

constexpr double kPi = std::numbers::pi;


RJet constant_like(const RJet& x, double v) { return RJet::constant(x.space(), v, x.order()); }

std::vector<std::string> default_names(int n) {
  if (n <= 3) {
    static const char* names[] = {"x", "y", "z"};
    return {names, names + n};
  }
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

// Rotated-frame helper shared by the sphere and the polar plane: given the
// destination components (a, b) in the frame rotated by the base longitude
// phi, the new longitude is phi + atan2(b, a).
RJet longitude(const RJet& phi, const RJet& a, const RJet& b) { return phi + atan2(b, a); }

}  // namespace

ManifoldModel::ManifoldModel(Definition def) : def_(std::move(def)) {
  if (def_.coordinates.empty()) throw std::invalid_argument("ManifoldModel: no coordinates");
  if (!def_.metric) throw std::invalid_argument("ManifoldModel: missing metric");
  if (!def_.injectivity_radius) def_.injectivity_radius = [](const Point&) { return std::numeric_limits<double>::infinity(); };
}

void ManifoldModel::check_chart(const Point& q) const {
  if (q.size() != dim()) throw DomainError("point has dimension " + std::to_string(q.size()) + ", model '" + name() + "' expects " + std::to_string(dim()));
  for (int i = 0; i < dim(); ++i) {
    const auto& c = def_.coordinates[static_cast<std::size_t>(i)];
    if (!std::isfinite(q[i])) throw DomainError("coordinate '" + c.name + "' is not finite");
    const bool low = c.lower_singularity && q[i] < *c.lower_singularity + def_.chart_margin;
    const bool high = c.upper_singularity && q[i] > *c.upper_singularity - def_.chart_margin;
    if (low || high) {
      std::ostringstream os;
      os << "coordinate '" << c.name << "' = " << q[i] << " lies within " << def_.chart_margin
         << " of a chart singularity of model '" << name() << "'";
      throw DomainError(os.str());
    }
  }
}

Point ManifoldModel::wrap(const Point& q) const {
  Point r = q;
  for (int i = 0; i < dim(); ++i) {
    const auto& c = def_.coordinates[static_cast<std::size_t>(i)];
    if (!c.period) continue;
    const double p = *c.period;
    r[i] = q[i] - p * std::floor((q[i] + 0.5 * p) / p);
  }
  return r;
}

Eigen::MatrixXd ManifoldModel::metric(const Point& q) const {
  const auto g = metric_jets(q, 0);
  const int n = dim();
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = g[static_cast<std::size_t>(a * n + b)].value();
  return m;
}

std::vector<RJet> ManifoldModel::metric_jets(const Point& q, int order) const {
  return def_.metric(coordinate_jets(q, order));
}

std::vector<RJet> ManifoldModel::exp_at(std::span<const RJet> base, std::span<const RJet> tangent) const {
  if (!def_.exp) throw std::logic_error("model '" + name() + "' has no closed-form exponential map");
  return def_.exp(base, tangent);
}

ManifoldModel ManifoldModel::without_analytic_exp() const {
  Definition d = def_;
  d.exp = nullptr;
  d.name += "[integrated]";
  return ManifoldModel(std::move(d));
}

ManifoldModel ManifoldModel::with_integrator_steps(int steps) const {
  Definition d = def_;
  d.integrator_steps = steps;
  return ManifoldModel(std::move(d));
}

// ---------------------------------------------------------------------------
// Builtin models

ManifoldModel euclidean(int n) {
  if (n < 1 || n > 3) throw DomainError("euclidean: dimension must be 1, 2 or 3");
  ManifoldModel::Definition d;
  d.name = "euclidean:" + std::to_string(n);
  for (const auto& s : default_names(n)) d.coordinates.push_back({s, std::nullopt, std::nullopt, std::nullopt});
  d.metric = [n](std::span<const RJet> x) {
    std::vector<RJet> g;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g.push_back(constant_like(x[0], a == b ? 1.0 : 0.0));
    return g;
  };
  d.exp = [](std::span<const RJet> base, std::span<const RJet> t) {
    std::vector<RJet> r;
    for (std::size_t i = 0; i < base.size(); ++i) r.push_back(base[i] + t[i]);
    return r;
  };
  d.flat = true;
  return ManifoldModel(std::move(d));
}

ManifoldModel circle() {
  ManifoldModel::Definition d;
  d.name = "circle";
  d.coordinates.push_back({"theta", 2.0 * kPi, std::nullopt, std::nullopt});
  d.metric = [](std::span<const RJet> x) { return std::vector<RJet>{constant_like(x[0], 1.0)}; };
  d.exp = [](std::span<const RJet> base, std::span<const RJet> t) { return std::vector<RJet>{base[0] + t[0]}; };
  d.injectivity_radius = [](const Point&) { return kPi; };
  d.flat = true;
  return ManifoldModel(std::move(d));
}

ManifoldModel sphere(double radius) {
  if (!(radius > 0.0)) throw DomainError("sphere: radius must be positive");
  ManifoldModel::Definition d;
  std::ostringstream name;
  name << "sphere:" << radius;
  d.name = name.str();
  d.coordinates.push_back({"theta", std::nullopt, 0.0, kPi});
  d.coordinates.push_back({"phi", 2.0 * kPi, std::nullopt, std::nullopt});
  const double a2 = radius * radius;
  d.metric = [a2](std::span<const RJet> x) {
    const RJet s = sin(x[0]);
    const RJet zero = constant_like(x[0], 0.0);
    return std::vector<RJet>{constant_like(x[0], a2), zero, zero, a2 * (s * s)};
  };
  // Great circle through the base point with initial velocity t.  In the
  // frame rotated by the base longitude the destination has components
  // (u, v, z); the angle travelled is sqrt(t_theta^2 + sin^2(theta) t_phi^2).
  d.exp = [](std::span<const RJet> base, std::span<const RJet> t) {
    const RJet st = sin(base[0]), ct = cos(base[0]);
    const RJet angle2 = t[0] * t[0] + (st * st) * (t[1] * t[1]);
    const RJet c = cos_sqrt(angle2), s = sinc_sqrt(angle2);
    const RJet u = c * st + s * t[0] * ct;
    const RJet v = s * t[1] * st;
    const RJet z = c * ct - s * t[0] * st;
    return std::vector<RJet>{atan2(sqrt(u * u + v * v), z), longitude(base[1], u, v)};
  };
  d.injectivity_radius = [radius](const Point&) { return kPi * radius; };
  return ManifoldModel(std::move(d));
}

ManifoldModel polar_plane() {
  ManifoldModel::Definition d;
  d.name = "polar-plane";
  d.coordinates.push_back({"r", std::nullopt, 0.0, std::nullopt});
  d.coordinates.push_back({"phi", 2.0 * kPi, std::nullopt, std::nullopt});
  d.metric = [](std::span<const RJet> x) {
    const RJet zero = constant_like(x[0], 0.0);
    return std::vector<RJet>{constant_like(x[0], 1.0), zero, zero, x[0] * x[0]};
  };
  d.exp = [](std::span<const RJet> base, std::span<const RJet> t) {
    const RJet u = base[0] + t[0];
    const RJet v = base[0] * t[1];
    return std::vector<RJet>{sqrt(u * u + v * v), longitude(base[1], u, v)};
  };
  const double margin = d.chart_margin;
  // Straight segments shorter than r - margin keep clear of the origin.
  d.injectivity_radius = [margin](const Point& q) { return std::max(q[0] - margin, 0.0); };
  d.flat = true;
  return ManifoldModel(std::move(d));
}

ManifoldModel make_model(std::string_view spec) {
  const std::string s(spec);
  auto parse_number = [&](const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty()) throw DomainError("malformed manifold spec '" + s + "'");
    return v;
  };
  if (s == "circle") return circle();
  if (s == "polar-plane") return polar_plane();
  if (s.rfind("euclidean:", 0) == 0) {
    const double n = parse_number(s.substr(10));
    if (n != std::floor(n)) throw DomainError("malformed manifold spec '" + s + "'");
    return euclidean(static_cast<int>(n));
  }
  if (s.rfind("sphere:", 0) == 0) return sphere(parse_number(s.substr(7)));
  throw DomainError("unknown manifold '" + s + "' (expected euclidean:n, circle, sphere:a or polar-plane)");
}

// ---------------------------------------------------------------------------
// Jet matrices

JetMatrix matmul(const JetMatrix& a, const JetMatrix& b, int n) {
  JetMatrix r;
  r.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RJet s(a[0].space(), std::min(a[0].order(), b[0].order()));
      for (int k = 0; k < n; ++k) s.add_product(a[static_cast<std::size_t>(i * n + k)], b[static_cast<std::size_t>(k * n + j)]);
      r.push_back(std::move(s));
    }
  return r;
}

JetMatrix transpose(const JetMatrix& a, int n) {
  JetMatrix r = a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[static_cast<std::size_t>(i * n + j)] = a[static_cast<std::size_t>(j * n + i)];
  return r;
}

JetMatrix inverse(const JetMatrix& a, int n) {
  JetMatrix m = a;
  JetMatrix inv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.push_back(constant_like(a[0], i == j ? 1.0 : 0.0));
  auto at = [n](JetMatrix& x, int i, int j) -> RJet& { return x[static_cast<std::size_t>(i * n + j)]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(m, r, col).value()) > std::abs(at(m, pivot, col).value())) pivot = r;
    if (at(m, pivot, col).value() == 0.0) throw std::domain_error("inverse: singular jet matrix");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(at(m, pivot, j), at(m, col, j));
        std::swap(at(inv, pivot, j), at(inv, col, j));
      }
    const RJet p = at(m, col, col);
    for (int j = 0; j < n; ++j) {
      at(m, col, j) = at(m, col, j) / p;
      at(inv, col, j) = at(inv, col, j) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const RJet f = at(m, r, col);
      for (int j = 0; j < n; ++j) {
        at(m, r, j) -= f * at(m, col, j);
        at(inv, r, j) -= f * at(inv, col, j);
      }
    }
  }
  return inv;
}

RJet determinant(const JetMatrix& a, int n) {
  if (n == 1) return a[0];
  if (n == 2) return a[0] * a[3] - a[1] * a[2];
  if (n == 3) {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
  throw std::invalid_argument("determinant: dimension above 3");
}

// ---------------------------------------------------------------------------
// Curvature

Tensor<RJet> christoffel_from_metric(const JetMatrix& g, int n) {
  const JetMatrix ginv = inverse(g, n);
  auto G = [&](int a, int b) -> const RJet& { return g[static_cast<std::size_t>(a * n + b)]; };
  // dg[c][a][b] = d_c g_ab
  std::vector<RJet> dg;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg.push_back(G(a, b).derivative(c));
  auto D = [&](int c, int a, int b) -> const RJet& { return dg[static_cast<std::size_t>((c * n + a) * n + b)]; };
  const int order = std::max(g[0].order() - 1, 0);
  Tensor<RJet> gamma(3, n, RJet(g[0].space(), order));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        RJet s(g[0].space(), order);
        for (int d = 0; d < n; ++d) {
          const RJet bracket = D(b, d, c) + D(c, d, b) - D(d, b, c);
          s.add_product(ginv[static_cast<std::size_t>(a * n + d)], bracket);
        }
        s *= 0.5;
        gamma.at({a, b, c}) = s;
        gamma.at({a, c, b}) = s;
      }
  return gamma;
}

Tensor<RJet> christoffel_jets(const ManifoldModel& model, const Point& q, int order) {
  return christoffel_from_metric(model.metric_jets(q, order + 1), model.dim());
}

Tensor<double> christoffel(const ManifoldModel& model, const Point& q) {
  return christoffel_jets(model, q, 0).map([](const RJet& j) { return j.value(); });
}

Tensor<RJet> ricci_from_christoffel(const Tensor<RJet>& gamma) {
  const int n = gamma.dim();
  const int order = std::max(gamma[0].order() - 1, 0);
  const JetSpace& sp = gamma[0].space();
  auto Gm = [&](int a, int b, int c) -> const RJet& { return gamma.at({a, b, c}); };
  Tensor<RJet> r(2, n, RJet(sp, order));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      RJet s(sp, order);
      for (int c = 0; c < n; ++c) {
        s += Gm(c, a, b).derivative(c);
        s -= Gm(c, a, c).derivative(b);
        for (int d = 0; d < n; ++d) {
          s.add_product(Gm(c, c, d), Gm(d, a, b));
          s -= Gm(c, b, d) * Gm(d, a, c);
        }
      }
      r.at({a, b}) = s;
    }
  return r;
}

Tensor<double> ricci(const ManifoldModel& model, const Point& q) {
  model.check_chart(q);
  return ricci_from_christoffel(christoffel_jets(model, q, 1)).map([](const RJet& j) { return j.value(); });
}

double scalar_curvature(const ManifoldModel& model, const Point& q) {
  const Eigen::MatrixXd ginv = model.metric(q).inverse();
  const auto r = ricci(model, q);
  double s = 0.0;
  for (int a = 0; a < model.dim(); ++a)
    for (int b = 0; b < model.dim(); ++b) s += ginv(a, b) * r.at({a, b});
  return s;
}

// ---------------------------------------------------------------------------
// Exponential map

Point geodesic_integrate(const ManifoldModel& model, const Point& q, const Point& xi, int steps) {
  const int n = model.dim();
  auto accel = [&](const Point& x, const Point& v) {
    const auto gamma = christoffel(model, x);
    Point a = Point::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) a[i] -= gamma.at({i, b, c}) * v[b] * v[c];
    return a;
  };
  Point x = q, v = xi;
  const double h = 1.0 / steps;
  for (int s = 0; s < steps; ++s) {
    const Point k1x = v, k1v = accel(x, v);
    const Point k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x, k2x);
    const Point k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x, k3x);
    const Point k4x = v + h * k3v, k4v = accel(x + h * k3x, k4x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return x;
}

Point exp_map(const ManifoldModel& model, const Point& q, const Point& xi) {
  model.check_chart(q);
  if (xi.size() != model.dim()) throw DomainError("exp_map: tangent vector dimension mismatch");
  const double norm = std::sqrt(xi.dot(model.metric(q) * xi));
  const double bound = model.injectivity_radius(q);
  if (!(norm < bound)) {
    std::ostringstream os;
    os << "exp_map: |xi| = " << norm << " is not below the injectivity bound " << bound << " of model '" << model.name() << "'";
    throw DomainError(os.str());
  }
  Point out(model.dim());
  try {
    if (model.has_analytic_exp()) {
      const auto base = coordinate_jets(q, 0);
      const auto t = coordinate_jets(xi, 0);
      const auto x = model.exp_at(base, t);
      for (int i = 0; i < model.dim(); ++i) out[i] = x[static_cast<std::size_t>(i)].value();
    } else {
      out = geodesic_integrate(model, q, xi, model.integrator_steps());
    }
  } catch (const std::domain_error&) {
    throw DomainError("exp_map: geodesic from the given point reaches a chart singularity of model '" + model.name() + "'");
  }
  return model.wrap(out);
}

std::vector<RJet> exp_jets(const ManifoldModel& model, const Point& q, int order) {
  const int n = model.dim();
  const JetSpace& sp = JetSpace::get(n, order);
  std::vector<RJet> out;
  if (model.has_analytic_exp()) {
    std::vector<RJet> base, t;
    for (int i = 0; i < n; ++i) {
      base.push_back(RJet::constant(sp, q[i]));
      t.push_back(RJet::variable(sp, i));
    }
    out = model.exp_at(base, t);
    // exp_q(0) = q; drop the rounding residue so the jets compose cleanly.
    for (auto& y : out) y[0] = 0.0;
    return out;
  }
  // Differentiate the numerical geodesic flow.
  FiniteDifferenceOptions fd;
  fd.step = 2e-2;
  for (int i = 0; i < n; ++i) {
    RJet y(sp);
    const ComplexFunction f = [&, i](const Point& xi) {
      return Complex(geodesic_integrate(model, q, xi, model.integrator_steps())[i] - q[i]);
    };
    std::vector<int> e(static_cast<std::size_t>(n));
    for (std::size_t m = 1; m < sp.size(); ++m) {
      auto ex = sp.exponents(m);
      for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(k)] = ex[static_cast<std::size_t>(k)];
      y[m] = fd_partial(f, Point::Zero(n), e, fd).real() / sp.factorial_weight(m);
    }
    out.push_back(std::move(y));
  }
  return out;
}

NormalChart normal_chart(const ManifoldModel& model, const Point& q, int order) {
  const int n = model.dim();
  NormalChart c;
  c.dim = n;
  c.displacement = exp_jets(model, q, order + 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      c.jacobian.push_back(c.displacement[static_cast<std::size_t>(a)].derivative(b));
    }
  const auto g_local = model.metric_jets(q, order);
  JetMatrix g;
  for (const auto& comp : g_local) g.push_back(compose(comp, std::span<const RJet>(c.displacement)));
  c.metric = matmul(transpose(c.jacobian, n), matmul(g, c.jacobian, n), n);
  RJet det = determinant(c.metric, n);
  det /= det.value();
  c.volume_ratio = sqrt(det);
  return c;
}

JetTable sqrt_g_jet(const ManifoldModel& model, const Point& q, int max_order) {
  if (max_order < 0 || max_order > 4) throw UnsupportedOrder("sqrt_g_jet: order " + std::to_string(max_order) + " exceeds 4");
  model.check_chart(q);
  const int n = model.dim();
  JetTable table;
  table.center = q;
  table.max_order = max_order;
  if (model.is_flat()) {
    for (int k = 0; k <= max_order; ++k) table.coefficients.emplace_back(k, n, k == 0 ? 1.0 : 0.0);
    return table;
  }
  const NormalChart chart = normal_chart(model, q, max_order);
  for (int k = 0; k <= max_order; ++k) {
    Tensor<double> t(k, n);
    for (std::size_t f = 0; f < t.size(); ++f) {
      const auto idx = unflatten(f, k, n);
      t[f] = chart.volume_ratio.partial(idx);
    }
    table.coefficients.push_back(std::move(t));
  }
  return table;
}

TensorField volume_jet_field(const ManifoldModel& model, int k, VolumeJetConvention convention) {
  const int n = model.dim();
  if (k < 0 || k > 4) throw UnsupportedOrder("volume jets above order 4 are not supported");
  if (model.is_flat()) {
    if (k == 0) return TensorField::constant(Tensor<Complex>(0, n, 1.0));
    return TensorField::zero(k, n);
  }
  if (!model.has_analytic_exp()) {
    return TensorField(k, n, [model, k, convention](const Point& q, int order) {
      if (order > 0) throw UnsupportedOrder("base-point derivatives of volume jets need a closed-form exponential map");
      const int n = model.dim();
      const NormalChart chart = normal_chart(model, q, k);
      const RJet rho = convention == VolumeJetConvention::direct ? chart.volume_ratio : 1.0 / chart.volume_ratio;
      const JetSpace& sp = JetSpace::get(n, 0);
      LocalTensor out(k, n);
      for (std::size_t f = 0; f < out.size(); ++f) out[f] = CJet::constant(sp, rho.partial(unflatten(f, k, n)));
      return out;
    });
  }
  return TensorField(k, n, [model, k, convention](const Point& q, int order) {
    const int n = model.dim();
    const int total = order + k;
    const JetSpace& big = JetSpace::get(2 * n, total + 1);
    std::vector<RJet> base, xi, y;
    for (int i = 0; i < n; ++i) {
      base.push_back(RJet::variable(big, i, q[i]));
      xi.push_back(RJet::variable(big, n + i));
      y.push_back(RJet::variable(big, i));
    }
    auto disp = model.exp_at(base, xi);
    for (auto& d : disp) d[0] = 0.0;
    JetMatrix jac;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        RJet j = disp[static_cast<std::size_t>(a)].derivative(n + b);
        jac.push_back(std::move(j));
      }
    const auto g_local = model.metric_jets(q, total);
    JetMatrix g_dest, g_base;
    for (const auto& comp : g_local) {
      g_dest.push_back(compose(comp, std::span<const RJet>(disp)));
      g_base.push_back(compose(comp, std::span<const RJet>(y)));
    }
    const JetMatrix G = matmul(transpose(jac, n), matmul(g_dest, jac, n), n);
    const RJet ratio2 = determinant(G, n) / determinant(g_base, n);
    const RJet rho = pow(ratio2, convention == VolumeJetConvention::direct ? 0.5 : -0.5);

    const JetSpace& small = JetSpace::get(n, order);
    LocalTensor out(k, n);
    std::vector<bool> done(out.size(), false);
    std::vector<int> e(static_cast<std::size_t>(2 * n));
    for (std::size_t f = 0; f < out.size(); ++f) {
      if (done[f]) continue;
      const auto idx = unflatten(f, k, n);
      std::vector<int> exi(static_cast<std::size_t>(n), 0);
      double weight = 1.0;
      for (int i : idx) weight *= ++exi[static_cast<std::size_t>(i)];
      CJet slice(small);
      for (std::size_t m = 0; m < small.size(); ++m) {
        auto ey = small.exponents(m);
        for (int i = 0; i < n; ++i) {
          e[static_cast<std::size_t>(i)] = ey[static_cast<std::size_t>(i)];
          e[static_cast<std::size_t>(n + i)] = exi[static_cast<std::size_t>(i)];
        }
        slice[m] = rho[big.index(e)] * weight;
      }
      for (auto o : permutation_orbit(f, k, n)) {
        out[o] = slice;
        done[o] = true;
      }
    }
    return out;
  });
}

// ---------------------------------------------------------------------------
// Covariant calculus

namespace {

Tensor<CJet> complex_gamma(const Tensor<RJet>& gamma) {
  return gamma.map([](const RJet& j) { return to_complex(j); });
}

}  // namespace

LocalTensor covariant_gradient(const LocalTensor& t, const Tensor<RJet>& gamma_real) {
  const int n = t.dim();
  const int r = t.rank();
  const auto gamma = complex_gamma(gamma_real);
  const int order = std::max(std::min(t[0].order() - 1, gamma[0].order()), 0);
  const JetSpace& sp = t[0].space();
  LocalTensor out(r + 1, n, CJet(sp, order));
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto idx = unflatten(f, r + 1, n);
    const int c = idx[0];
    std::vector<int> rest(idx.begin() + 1, idx.end());
    CJet s = t.at(rest).derivative(c).truncated(order);
    for (int i = 0; i < r; ++i) {
      const int bi = rest[static_cast<std::size_t>(i)];
      std::vector<int> sub = rest;
      for (int d = 0; d < n; ++d) {
        sub[static_cast<std::size_t>(i)] = d;
        s -= gamma.at({d, c, bi}) * t.at(sub);
      }
    }
    out[f] = std::move(s);
  }
  return out;
}

LocalTensor divergence(const LocalTensor& t, const Tensor<RJet>& gamma_real) {
  const int n = t.dim();
  const int r = t.rank();
  if (r < 1) throw std::invalid_argument("divergence: rank-0 tensor");
  const auto gamma = complex_gamma(gamma_real);
  const int order = std::max(std::min(t[0].order() - 1, gamma[0].order()), 0);
  const JetSpace& sp = t[0].space();
  LocalTensor out(r - 1, n, CJet(sp, order));
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto rest = unflatten(f, r - 1, n);
    std::vector<int> full(static_cast<std::size_t>(r));
    std::copy(rest.begin(), rest.end(), full.begin() + 1);
    CJet s(sp, order);
    for (int c = 0; c < n; ++c) {
      full[0] = c;
      s += t.at(full).derivative(c).truncated(order);
      for (int d = 0; d < n; ++d) {
        full[0] = d;
        s.add_product(gamma.at({c, c, d}), t.at(full));
        full[0] = c;
        for (int i = 1; i < r; ++i) {
          const int ai = full[static_cast<std::size_t>(i)];
          full[static_cast<std::size_t>(i)] = d;
          s.add_product(gamma.at({ai, c, d}), t.at(full));
          full[static_cast<std::size_t>(i)] = ai;
        }
      }
    }
    out[f] = std::move(s);
  }
  return out;
}

TensorField divergence_field(const ManifoldModel& model, const TensorField& x) {
  if (x.rank() < 1) throw std::invalid_argument("divergence_field: rank-0 field");
  if (x.is_zero()) return TensorField::zero(x.rank() - 1, x.dim());
  return TensorField(x.rank() - 1, x.dim(), [model, x](const Point& q, int order) {
    const LocalTensor local = x.expand(q, order + 1);
    return divergence(local, christoffel_jets(model, q, order));
  });
}

Tensor<Complex> sym_cov_deriv(const ManifoldModel& model, const ScalarField& psi, int k, const Point& q) {
  if (k < 0 || k > 4) throw UnsupportedOrder("sym_cov_deriv: order " + std::to_string(k) + " exceeds 4");
  model.check_chart(q);
  LocalTensor t = psi.expand(q, k);
  if (k > 0) {
    const auto gamma = christoffel_jets(model, q, k - 1);
    for (int j = 0; j < k; ++j) t = covariant_gradient(t, gamma);
  }
  return symmetrized(values(t));
}

Tensor<Complex> pullback_jet(const ManifoldModel& model, const ScalarField& psi, const Point& q, int k, JetMethod method,
                             const FiniteDifferenceOptions& fd) {
  if (k < 0 || k > 8) throw UnsupportedOrder("pullback_jet: order " + std::to_string(k) + " exceeds 8");
  model.check_chart(q);
  const int n = model.dim();
  if (method == JetMethod::finite_difference) {
    const ComplexFunction f = [&](const Point& xi) { return psi.at(exp_map(model, q, xi))[0]; };
    return fd_derivative_tensor(f, Point::Zero(n), k, fd);
  }
  const auto y = exp_jets(model, q, k);
  const CJet local = psi.expand(q, k)[0];
  const CJet pulled = compose(local, std::span<const RJet>(y));
  Tensor<Complex> out(k, n);
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = pulled.partial(unflatten(f, k, n));
  return out;
}

TensorField metric_field(const ManifoldModel& model) {
  return TensorField::from_components(2, model.dim(), [model](std::span<const RJet> x) {
    std::vector<CJet> out;
    for (const auto& g : model.metric_at(x)) out.push_back(to_complex(g));
    return out;
  });
}

TensorField inverse_metric_field(const ManifoldModel& model) {
  return TensorField::from_components(2, model.dim(), [model](std::span<const RJet> x) {
    std::vector<CJet> out;
    for (const auto& g : inverse(model.metric_at(x), model.dim())) out.push_back(to_complex(g));
    return out;
  });
}

TensorField ricci_field(const ManifoldModel& model) {
  if (model.is_flat()) return TensorField::zero(2, model.dim());
  return TensorField(2, model.dim(), [model](const Point& q, int order) {
    const auto r = ricci_from_christoffel(christoffel_jets(model, q, order + 1));
    return r.map([](const RJet& j) { return to_complex(j); });
  });
}

}  // namespace wue
