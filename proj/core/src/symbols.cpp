#include "wue/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "wue/error.hpp"
#include "wue/expression.hpp"

namespace wue {

namespace detail {

TensorField GradedFields::coefficient(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? TensorField::zero(k, dim_) : it->second;
}

std::vector<int> GradedFields::grades() const {
  std::vector<int> g;
  for (const auto& [k, f] : terms_) g.push_back(k);
  return g;
}

void GradedFields::add_field(int k, const TensorField& field, const char* what) {
  if (k < 0 || k > kMaxDegree)
    throw UnsupportedOrder(std::string(what) + ": degree " + std::to_string(k) + " exceeds " +
                           std::to_string(kMaxDegree));
  if (field.rank() != k) throw std::invalid_argument(std::string(what) + ": coefficient rank differs from degree");
  if (field.dim() != dim_) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  if (field.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) terms_.emplace(k, field);
  else it->second = it->second + field;
}

}  // namespace detail

MomentumPolynomial MomentumPolynomial::scaled(Complex s) const {
  MomentumPolynomial r(dim_);
  for (const auto& [k, f] : terms_) r.add(k, f.scaled(s));
  return r;
}

MomentumPolynomial operator+(const MomentumPolynomial& a, const MomentumPolynomial& b) {
  MomentumPolynomial r = a;
  for (const auto& [k, f] : b.terms_) r.add(k, f);
  return r;
}

CovariantOperator CovariantOperator::scaled(Complex s) const {
  CovariantOperator r(dim_);
  for (const auto& [k, f] : terms_) r.add(k, f.scaled(s));
  return r;
}

CovariantOperator operator+(const CovariantOperator& a, const CovariantOperator& b) {
  CovariantOperator r = a;
  for (const auto& [k, f] : b.terms_) r.add(k, f);
  return r;
}

// --- orderings --------------------------------------------------------------

namespace {

std::vector<Complex> exp_series(Complex s) {
  std::vector<Complex> a(kMaxDegree + 1);
  a[0] = 1.0;
  for (int k = 1; k <= kMaxDegree; ++k) a[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k - 1)] * s / double(k);
  return a;
}

}  // namespace

OrderingScheme OrderingScheme::from_coefficients(std::string name, std::vector<Complex> a) {
  if (a.empty() || std::abs(a[0] - Complex(1.0)) > 0.0)
    throw ConfigError("ordering '" + name + "': the zeroth coefficient must be 1");
  if (a.size() > static_cast<std::size_t>(kMaxDegree) + 1) a.resize(static_cast<std::size_t>(kMaxDegree) + 1);
  OrderingScheme o;
  o.name_ = std::move(name);
  o.a_ = std::move(a);
  return o;
}

OrderingScheme OrderingScheme::weyl() { return from_coefficients("weyl", {1.0}); }
OrderingScheme OrderingScheme::standard() { return from_coefficients("standard", exp_series({0.0, -0.5})); }
OrderingScheme OrderingScheme::anti_standard() { return from_coefficients("anti-standard", exp_series({0.0, 0.5})); }

OrderingScheme OrderingScheme::symmetrized_standard() {
  std::vector<Complex> a(kMaxDegree + 1, 0.0);
  // cos(x/2) = 1 - x^2/8 + x^4/384 - ...
  double term = 1.0;
  for (int k = 0; k <= kMaxDegree; k += 2) {
    a[static_cast<std::size_t>(k)] = term;
    term *= -0.25 / ((k + 1.0) * (k + 2.0));
  }
  return from_coefficients("symmetrized-standard", a);
}

OrderingScheme OrderingScheme::standard_printed(double hbar) {
  return from_coefficients("standard-printed", exp_series({0.0, 0.5 * hbar}));
}

OrderingScheme OrderingScheme::preset(std::string_view name, double hbar) {
  if (name == "weyl") return weyl();
  if (name == "standard") return standard();
  if (name == "anti-standard") return anti_standard();
  if (name == "symmetrized-standard") return symmetrized_standard();
  if (name == "standard-printed") return standard_printed(hbar);
  throw ConfigError("unknown ordering '" + std::string(name) +
                    "' (expected weyl, standard, anti-standard, symmetrized-standard or standard-printed)");
}

bool OrderingScheme::is_weyl() const {
  return std::all_of(a_.begin() + 1, a_.end(), [](Complex c) { return c == Complex(0.0); });
}

bool OrderingScheme::has_real_coefficients() const {
  return std::all_of(a_.begin(), a_.end(), [](Complex c) { return c.imag() == 0.0; });
}

OrderingScheme OrderingScheme::inverse() const {
  std::vector<Complex> b(kMaxDegree + 1, 0.0);
  b[0] = 1.0;
  for (int k = 1; k <= kMaxDegree; ++k) {
    Complex s = 0.0;
    for (int j = 1; j <= k; ++j) s += coefficient(j) * b[static_cast<std::size_t>(k - j)];
    b[static_cast<std::size_t>(k)] = -s;
  }
  while (b.size() > 1 && b.back() == Complex(0.0)) b.pop_back();
  return from_coefficients(name_ + "^-1", b);
}

// --- symbols and operators ----------------------------------------------------

Complex eval_symbol(const MomentumPolynomial& f, std::span<const double> p, const Point& q) {
  if (static_cast<int>(p.size()) != f.dim() || q.size() != f.dim())
    throw std::invalid_argument("eval_symbol: dimension mismatch");
  Complex s = 0.0;
  for (int m : f.grades()) s += contract_with_vector(f.coefficient(m).at(q), p);
  return s;
}

Complex apply_operator(const ManifoldModel& model, const CovariantOperator& d, const ScalarField& psi, const Point& q) {
  Complex s = 0.0;
  for (int k : d.grades()) s += contract_full(d.coefficient(k).at(q), sym_cov_deriv(model, psi, k, q));
  return s;
}

MomentumPolynomial delta_apply(const ManifoldModel& model, const MomentumPolynomial& f, const QuantizationContext& ctx) {
  MomentumPolynomial r(f.dim());
  for (int m : f.grades()) {
    if (m == 0) continue;
    r.add(m - 1, symmetrized(divergence_field(model, f.coefficient(m))).scaled(-ctx.hbar * m));
  }
  return r;
}

PointTransformSample point_transform_sample(const MomentumPolynomial& f, std::span<const double> p, const Point& q,
                                            const QuantizationContext& ctx) {
  const ManifoldModel polar = polar_plane();
  if (f.dim() != 2 || p.size() != 2) throw std::invalid_argument("point_transform_sample: needs a symbol on the polar plane");
  polar.check_chart(q);
  PointTransformSample out;
  out.polar = eval_symbol(delta_apply(polar, f, ctx), p, q);

  // Jets in (x, y, p_x, p_y) around the Cartesian image of (p, q).
  const double r0 = q[0], phi0 = q[1];
  const double c0 = std::cos(phi0), s0 = std::sin(phi0);
  const JetSpace& sp = JetSpace::get(4, 2);
  const RJet x = RJet::variable(sp, 0, r0 * c0), y = RJet::variable(sp, 1, r0 * s0);
  const RJet px = RJet::variable(sp, 2, c0 * p[0] - s0 * p[1] / r0);
  const RJet py = RJet::variable(sp, 3, s0 * p[0] + c0 * p[1] / r0);
  const RJet r = sqrt(x * x + y * y), phi = atan2(y, x);
  const RJet cp = cos(phi), spn = sin(phi);
  const std::vector<RJet> mom = {cp * px + spn * py, r * (cp * py - spn * px)};
  std::vector<RJet> disp = {r - r0, phi - phi0};
  for (auto& d : disp) d[0] = 0.0;  // rounding residue of the base point

  CJet total(sp, 2);
  for (int m : f.grades()) {
    const LocalTensor local = f.coefficient(m).expand(q, 2);
    for (std::size_t i = 0; i < local.size(); ++i) {
      CJet term = compose(local[i], std::span<const RJet>(disp));
      for (int a : unflatten(i, m, 2)) term = term * mom[static_cast<std::size_t>(a)];
      total += term;
    }
  }
  const int xp[] = {0, 2}, yp[] = {1, 3};
  out.cartesian = -ctx.hbar * (total.partial(xp) + total.partial(yp));
  return out;
}

MomentumPolynomial ordering_transform(const ManifoldModel& model, const OrderingScheme& a, const MomentumPolynomial& f,
                                      const QuantizationContext& ctx) {
  MomentumPolynomial out = f;
  MomentumPolynomial power = f;
  for (int k = 1; k <= kMaxDegree && power.top() >= 0; ++k) {
    power = delta_apply(model, power, ctx);
    const Complex ak = a.coefficient(k);
    if (ak != Complex(0.0)) out = out + power.scaled(ak);
  }
  return out;
}

namespace {

double graded_difference(const detail::GradedFields& a, const detail::GradedFields& b,
                         const std::function<TensorField(int)>& ca, const std::function<TensorField(int)>& cb,
                         std::span<const Point> points) {
  std::set<int> grades;
  for (int k : a.grades()) grades.insert(k);
  for (int k : b.grades()) grades.insert(k);
  double d = 0.0;
  for (int k : grades) {
    const TensorField fa = ca(k), fb = cb(k);
    for (const auto& q : points) {
      const auto va = fa.at(q), vb = fb.at(q);
      for (std::size_t i = 0; i < va.size(); ++i) d = std::max(d, std::abs(va[i] - vb[i]));
    }
  }
  return d;
}

}  // namespace

double max_coefficient_difference(const CovariantOperator& a, const CovariantOperator& b, std::span<const Point> points) {
  return graded_difference(
      a, b, [&](int k) { return a.coefficient(k); }, [&](int k) { return b.coefficient(k); }, points);
}

double max_coefficient_difference(const MomentumPolynomial& a, const MomentumPolynomial& b,
                                  std::span<const Point> points) {
  return graded_difference(
      a, b, [&](int k) { return a.coefficient(k); }, [&](int k) { return b.coefficient(k); }, points);
}

// --- bases and matrices ------------------------------------------------------

ScalarField FourierBasis::function(int i) const {
  const double k = label(i);
  return TensorField::from_components(0, 1, [k](std::span<const RJet> x) {
    CJet e = expi(x[0] * k);
    e *= Complex(1.0 / std::sqrt(2.0 * std::numbers::pi));
    return std::vector<CJet>{std::move(e)};
  });
}

QuadratureRule FourierBasis::rule(int level) const {
  const int n = (4 * cutoff_ + 16) << level;
  return periodic_trapezoid(n, -std::numbers::pi, 2.0 * std::numbers::pi);
}

RJet hermite_function(int n, const RJet& x) {
  RJet h0 = std::pow(std::numbers::pi, -0.25) * exp(-0.5 * (x * x));
  if (n == 0) return h0;
  RJet h1 = std::sqrt(2.0) * (x * h0);
  for (int j = 2; j <= n; ++j) {
    RJet h2 = std::sqrt(2.0 / j) * (x * h1) - std::sqrt((j - 1.0) / j) * h0;
    h0 = std::move(h1);
    h1 = std::move(h2);
  }
  return h1;
}

ScalarField HermiteBasis::function(int i) const {
  return TensorField::scalar(1, [i](std::span<const RJet> x) { return hermite_function(i, x[0]); });
}

QuadratureRule HermiteBasis::rule(int level) const {
  const auto gh = gauss_hermite(std::max(4 * count_, 16) << level);
  QuadratureRule r;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    Point p(1);
    p[0] = gh.nodes[i];
    r.nodes.push_back(p);
    r.weights.push_back(gh.scaled_weights[i]);
  }
  return r;
}

namespace {

Eigen::MatrixXcd assemble(const ManifoldModel& model, const CovariantOperator& d, const OrthonormalBasis& basis,
                          const QuadratureRule& rule) {
  const int size = basis.size();
  const auto nodes = static_cast<Eigen::Index>(rule.nodes.size());
  std::vector<ScalarField> phi;
  for (int i = 0; i < size; ++i) phi.push_back(basis.function(i));
  Eigen::MatrixXcd left(nodes, size), right(nodes, size);
  for (Eigen::Index n = 0; n < nodes; ++n) {
    const Point& x = rule.nodes[static_cast<std::size_t>(n)];
    const double vol = std::sqrt(model.metric(x).determinant());
    std::vector<std::pair<int, Tensor<Complex>>> coeffs;
    for (int k : d.grades()) coeffs.emplace_back(k, d.coefficient(k).at(x));
    const double w = rule.weights[static_cast<std::size_t>(n)] * vol;
    for (int i = 0; i < size; ++i) {
      left(n, i) = std::conj(phi[static_cast<std::size_t>(i)].at(x)[0]) * w;
      Complex s = 0.0;
      for (const auto& [k, c] : coeffs) s += contract_full(c, sym_cov_deriv(model, phi[static_cast<std::size_t>(i)], k, x));
      right(n, i) = s;
    }
  }
  return left.transpose() * right;
}

}  // namespace

QuantizerMatrix operator_matrix(const ManifoldModel& model, const CovariantOperator& d, const OrthonormalBasis& basis,
                                const QuantizationContext& ctx) {
  if (d.dim() != model.dim()) throw std::invalid_argument("operator_matrix: dimension mismatch");
  const Eigen::MatrixXcd coarse = assemble(model, d, basis, basis.rule(0));
  const Eigen::MatrixXcd fine = assemble(model, d, basis, basis.rule(1));
  const double scale = std::max(1.0, fine.cwiseAbs().maxCoeff());
  const double diff = (fine - coarse).cwiseAbs().maxCoeff();
  if (diff > ctx.quadrature_tolerance * scale)
    throw AccuracyError("operator_matrix: quadrature not converged in the " + basis.name() + " basis", diff);
  QuantizerMatrix m;
  m.values = fine;
  m.basis = basis.name();
  for (int i = 0; i < basis.size(); ++i) m.labels.push_back(basis.label(i));
  return m;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_defect: matrix is not square");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// --- named fields ----------------------------------------------------------------

namespace {

std::vector<std::string> coordinate_names(const ManifoldModel& model) {
  std::vector<std::string> names;
  for (const auto& c : model.coordinates()) names.push_back(c.name);
  return names;
}

/// s e_1 x ... x e_1 (just s when rank is 0 or the dimension is 1).
TensorField leading_component(int rank, int dim, std::function<RJet(std::span<const RJet>)> s) {
  return TensorField::from_components(rank, dim, [rank, dim, s = std::move(s)](std::span<const RJet> x) {
    std::vector<CJet> out(tensor_size(rank, dim), CJet(x[0].space(), x[0].order()));
    out[0] = to_complex(s(x));
    return out;
  });
}

}  // namespace

TensorField named_field(const ManifoldModel& model, std::string_view name, int rank) {
  const int n = model.dim();
  if (name == "inverse-metric") {
    if (rank != 2) throw ConfigError("field 'inverse-metric' has rank 2, requested rank " + std::to_string(rank));
    return inverse_metric_field(model);
  }
  if (name == "constant")
    return leading_component(rank, n, [](std::span<const RJet> x) {
      return RJet::constant(x[0].space(), 1.0, x[0].order());
    });
  if (name == "cos-theta") return leading_component(rank, n, [](std::span<const RJet> x) { return cos(x[0]); });
  constexpr std::string_view custom = "custom:";
  if (name.starts_with(custom)) {
    const auto expr = std::make_shared<const Expression>(Expression::parse(name.substr(custom.size()), coordinate_names(model)));
    return leading_component(rank, n, [expr](std::span<const RJet> x) { return expr->evaluate(x); });
  }
  throw ConfigError("unknown field '" + std::string(name) +
                    "' (expected constant, cos-theta, inverse-metric or custom:<expr>)");
}

TensorField expression_tensor_field(const ManifoldModel& model, const std::vector<std::string>& components, int rank) {
  const int n = model.dim();
  if (components.size() != tensor_size(rank, n))
    throw ConfigError("expected " + std::to_string(tensor_size(rank, n)) + " components for a rank-" +
                      std::to_string(rank) + " field, got " + std::to_string(components.size()));
  std::vector<Expression> exprs;
  for (const auto& c : components) exprs.push_back(Expression::parse(c, coordinate_names(model)));
  const TensorField raw = TensorField::from_components(rank, n, [exprs](std::span<const RJet> x) {
    std::vector<CJet> out;
    for (const auto& e : exprs) out.push_back(to_complex(e.evaluate(x)));
    return out;
  });
  return symmetrized(raw);
}

}  // namespace wue
