#pragma once

// Phase-space symbols polynomial in the momenta, covariant differential
// operators, ordering schemes A(Delta) and the matrix representation of
// operators in orthonormal bases.

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wue/fields.hpp"
#include "wue/geometry.hpp"
#include "wue/quadrature.hpp"

namespace wue {

struct QuantizationContext {
  double hbar = 1.0;
  /// Target accuracy for quadrature-based matrix elements.
  double quadrature_tolerance = 1e-10;
};

/// Maximal momentum degree / derivative order handled by the calculus.
inline constexpr int kMaxDegree = 4;

namespace detail {

/// Sum of symmetric tensor fields indexed by their rank.
class GradedFields {
 public:
  explicit GradedFields(int dim = 1) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  /// Highest grade present, -1 when empty.
  int top() const noexcept { return terms_.empty() ? -1 : terms_.rbegin()->first; }
  bool has(int k) const { return terms_.count(k) > 0; }
  /// Coefficient of grade k (a zero field when absent).
  TensorField coefficient(int k) const;
  std::vector<int> grades() const;

 protected:
  void add_field(int k, const TensorField& field, const char* what);
  int dim_;
  std::map<int, TensorField> terms_;
};

}  // namespace detail

/// f(p, q) = sum_m X_m^{a1..am}(q) p_a1 ... p_am with symmetric X_m.
class MomentumPolynomial : public detail::GradedFields {
 public:
  explicit MomentumPolynomial(int dim = 1) : GradedFields(dim) {}
  /// Adds X p^m (X must have rank m; m <= 4).
  MomentumPolynomial& add(int degree, const TensorField& x) {
    add_field(degree, x, "MomentumPolynomial");
    return *this;
  }
  int degree() const noexcept { return top(); }
  MomentumPolynomial scaled(Complex s) const;
  friend MomentumPolynomial operator+(const MomentumPolynomial& a, const MomentumPolynomial& b);
};

/// D = sum_k C_k^{a1..ak}(q) nabla_a1 ... nabla_ak with symmetric C_k.
class CovariantOperator : public detail::GradedFields {
 public:
  explicit CovariantOperator(int dim = 1) : GradedFields(dim) {}
  CovariantOperator& add(int order, const TensorField& c) {
    add_field(order, c, "CovariantOperator");
    return *this;
  }
  int order() const noexcept { return top(); }
  CovariantOperator scaled(Complex s) const;
  friend CovariantOperator operator+(const CovariantOperator& a, const CovariantOperator& b);
};

/// A(Delta) = sum_k a_k Delta^k with a_0 = 1.
class OrderingScheme {
 public:
  static OrderingScheme weyl();
  /// exp(-i Delta / 2): maps Weyl images to standard (X nabla^m) ordering.
  static OrderingScheme standard();
  /// exp(+i Delta / 2).
  static OrderingScheme anti_standard();
  /// cos(Delta / 2): average of standard and anti-standard, real coefficients.
  static OrderingScheme symmetrized_standard();
  /// exp(i hbar Delta / 2).  Carries an extra factor of hbar compared with
  /// standard() (Delta is already proportional to hbar) and an opposite
  /// sign; kept as a comparison variant.
  static OrderingScheme standard_printed(double hbar);
  static OrderingScheme from_coefficients(std::string name, std::vector<Complex> a);
  /// "weyl", "standard", "anti-standard", "symmetrized-standard", "standard-printed".
  static OrderingScheme preset(std::string_view name, double hbar);

  const std::string& name() const noexcept { return name_; }
  Complex coefficient(int k) const {
    return k < static_cast<int>(a_.size()) ? a_[static_cast<std::size_t>(k)] : Complex(0.0);
  }
  const std::vector<Complex>& coefficients() const noexcept { return a_; }
  bool is_weyl() const;
  bool has_real_coefficients() const;
  /// Power-series reciprocal 1/A truncated at order kMaxDegree.
  OrderingScheme inverse() const;

 private:
  std::string name_;
  std::vector<Complex> a_;
};

/// Pointwise value f(p, q).
Complex eval_symbol(const MomentumPolynomial& f, std::span<const double> p, const Point& q);

/// (D psi)(q).
Complex apply_operator(const ManifoldModel& model, const CovariantOperator& d, const ScalarField& psi, const Point& q);

/// Delta f for Delta = -hbar (d^2/dp_a dq^a + p_c G^c_ab d^2/dp_a dp_b + G^b_ab d/dp_a);
/// on a degree-m term this is -hbar m sym(nabla_c X^{c a2..am}).
MomentumPolynomial delta_apply(const ManifoldModel& model, const MomentumPolynomial& f, const QuantizationContext& ctx);

struct PointTransformSample {
  Complex polar;      // (Delta f)(p, q) from the polar-chart connection
  Complex cartesian;  // -hbar d^2 f / dp_i dx^i after rewriting f in (x, y, p_x, p_y)
};

/// Evaluates Delta f for a symbol on the polar plane both ways at the polar
/// phase-space point (p_r, p_phi; r, phi).
PointTransformSample point_transform_sample(const MomentumPolynomial& f, std::span<const double> p, const Point& q,
                                            const QuantizationContext& ctx);

/// A(Delta) f.
MomentumPolynomial ordering_transform(const ManifoldModel& model, const OrderingScheme& a, const MomentumPolynomial& f,
                                      const QuantizationContext& ctx);

/// Largest difference between coefficient tensors of two operators at the
/// given points.
double max_coefficient_difference(const CovariantOperator& a, const CovariantOperator& b, std::span<const Point> points);
double max_coefficient_difference(const MomentumPolynomial& a, const MomentumPolynomial& b, std::span<const Point> points);

// --- matrix representations ----------------------------------------------

/// Complex matrix together with the labels of the basis it refers to.
struct QuantizerMatrix {
  Eigen::MatrixXcd values;
  std::string basis;
  std::vector<int> labels;
};

class OrthonormalBasis {
 public:
  virtual ~OrthonormalBasis() = default;
  virtual std::string name() const = 0;
  virtual int size() const = 0;
  virtual int label(int i) const = 0;
  virtual ScalarField function(int i) const = 0;
  /// Quadrature rule in the coordinate measure dq (operator_matrix adds the
  /// sqrt(det g) factor); larger levels are finer.
  virtual QuadratureRule rule(int level) const = 0;
};

/// e^{i k theta} / sqrt(2 pi), k = -K..K, on the circle.
class FourierBasis final : public OrthonormalBasis {
 public:
  explicit FourierBasis(int cutoff) : cutoff_(cutoff) {}
  std::string name() const override { return "fourier"; }
  int size() const override { return 2 * cutoff_ + 1; }
  int label(int i) const override { return i - cutoff_; }
  ScalarField function(int i) const override;
  QuadratureRule rule(int level) const override;
  int cutoff() const noexcept { return cutoff_; }

 private:
  int cutoff_;
};

/// Hermite functions h_0 .. h_{K-1} on the real line.
class HermiteBasis final : public OrthonormalBasis {
 public:
  explicit HermiteBasis(int count) : count_(count) {}
  std::string name() const override { return "hermite"; }
  int size() const override { return count_; }
  int label(int i) const override { return i; }
  ScalarField function(int i) const override;
  QuadratureRule rule(int level) const override;

 private:
  int count_;
};

/// Hermite function h_n as a jet of its argument.
RJet hermite_function(int n, const RJet& x);

/// <phi_j | D phi_k>.  Throws AccuracyError if two quadrature levels
/// disagree by more than the context tolerance.
QuantizerMatrix operator_matrix(const ManifoldModel& model, const CovariantOperator& d, const OrthonormalBasis& basis,
                                const QuantizationContext& ctx);

/// max |M - M^dagger|.
double hermiticity_defect(const Eigen::MatrixXcd& m);

// --- named coefficient fields ---------------------------------------------

/// Builds a rank-`rank` coefficient field from a name: "constant" (1),
/// "cos-theta" (cosine of the first coordinate), "inverse-metric" (rank 2
/// only) or "custom:<expr>".  Scalar names produce s e_1 x ... x e_1 for
/// rank > 0 in dimension > 1.
TensorField named_field(const ManifoldModel& model, std::string_view name, int rank);

/// Rank-m field with every component given by an expression, symmetrized.
TensorField expression_tensor_field(const ManifoldModel& model, const std::vector<std::string>& components, int rank);

}  // namespace wue
