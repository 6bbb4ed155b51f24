#pragma once

// Smooth tensor fields on a coordinate chart.  A field is known through its
// local Taylor expansion: expand(q, k) returns the component jets in the
// displacement x - q up to order k.  Derived fields (divergences, products
// with curvature, ...) are built by composing expansions, so every
// derivative stays exact up to rounding.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "wue/jet.hpp"
#include "wue/tensor.hpp"

namespace wue {

using Point = Eigen::VectorXd;
using LocalTensor = Tensor<CJet>;

class TensorField {
 public:
  using Expander = std::function<LocalTensor(const Point& q, int order)>;
  /// Components as functions of the chart coordinates (jets), row-major.
  using ComponentFunction = std::function<std::vector<CJet>(std::span<const RJet> x)>;

  TensorField() = default;
  TensorField(int rank, int dim, Expander expander);

  /// Field given by component formulas evaluated on jets.
  static TensorField from_components(int rank, int dim, ComponentFunction f);
  /// Scalar field from a real formula.
  static TensorField scalar(int dim, std::function<RJet(std::span<const RJet> x)> f);
  static TensorField zero(int rank, int dim);
  static TensorField constant(const Tensor<Complex>& value);

  int rank() const noexcept { return rank_; }
  int dim() const noexcept { return dim_; }
  bool is_zero() const noexcept { return zero_; }

  LocalTensor expand(const Point& q, int order) const;
  Tensor<Complex> at(const Point& q) const;

  TensorField scaled(Complex s) const;
  friend TensorField operator+(const TensorField& a, const TensorField& b);

 private:
  int rank_ = 0;
  int dim_ = 1;
  bool zero_ = true;
  std::shared_ptr<const Expander> expander_;
};

using ScalarField = TensorField;

/// Jets of the chart coordinates around q: x_i = q_i + t_i.
std::vector<RJet> coordinate_jets(const Point& q, int order);

/// Zero local tensor in the jet space of dimension dim and given order.
LocalTensor zero_local(int rank, int dim, int order);

/// Pointwise (order-0) value of a local tensor.
Tensor<Complex> values(const LocalTensor& t);

/// Tensor product-contraction: out^{rest} = X^{b1..bk rest} J_{b1..bk}.
LocalTensor contract_leading(const LocalTensor& x, const LocalTensor& j);

/// Field version of contract_leading.
TensorField contract_leading(const TensorField& x, const TensorField& j);

/// Pointwise product of a scalar field and a tensor field.
TensorField multiply(const ScalarField& s, const TensorField& t);

/// Symmetrized copy of a field.
TensorField symmetrized(const TensorField& t);

}  // namespace wue
