#include "wue/fields.hpp"

#include <stdexcept>

namespace wue {

TensorField::TensorField(int rank, int dim, Expander expander)
    : rank_(rank), dim_(dim), zero_(false), expander_(std::make_shared<const Expander>(std::move(expander))) {}

TensorField TensorField::from_components(int rank, int dim, ComponentFunction f) {
  return TensorField(rank, dim, [rank, dim, f = std::move(f)](const Point& q, int order) {
    const auto x = coordinate_jets(q, order);
    auto comps = f(x);
    if (comps.size() != tensor_size(rank, dim)) throw std::invalid_argument("TensorField: wrong component count");
    LocalTensor t(rank, dim);
    for (std::size_t i = 0; i < comps.size(); ++i) t[i] = std::move(comps[i]);
    return t;
  });
}

TensorField TensorField::scalar(int dim, std::function<RJet(std::span<const RJet>)> f) {
  return from_components(0, dim, [f = std::move(f)](std::span<const RJet> x) {
    return std::vector<CJet>{to_complex(f(x))};
  });
}

TensorField TensorField::zero(int rank, int dim) {
  TensorField z;
  z.rank_ = rank;
  z.dim_ = dim;
  z.zero_ = true;
  return z;
}

TensorField TensorField::constant(const Tensor<Complex>& value) {
  return TensorField(value.rank(), value.dim(), [value](const Point&, int order) {
    const JetSpace& s = JetSpace::get(value.dim(), order);
    LocalTensor t(value.rank(), value.dim());
    for (std::size_t i = 0; i < value.size(); ++i) t[i] = CJet::constant(s, value[i]);
    return t;
  });
}

LocalTensor TensorField::expand(const Point& q, int order) const {
  if (q.size() != dim_) throw std::invalid_argument("TensorField::expand: point dimension mismatch");
  if (!expander_) return zero_local(rank_, dim_, order);
  return (*expander_)(q, order);
}

Tensor<Complex> TensorField::at(const Point& q) const { return values(expand(q, 0)); }

TensorField TensorField::scaled(Complex s) const {
  if (zero_ || s == Complex(0.0)) return zero(rank_, dim_);
  auto inner = expander_;
  return TensorField(rank_, dim_, [inner, s](const Point& q, int order) {
    LocalTensor t = (*inner)(q, order);
    for (auto& c : t.data()) c *= s;
    return t;
  });
}

TensorField operator+(const TensorField& a, const TensorField& b) {
  if (a.rank_ != b.rank_ || a.dim_ != b.dim_) throw std::invalid_argument("TensorField: shape mismatch in sum");
  if (a.zero_) return b;
  if (b.zero_) return a;
  auto ea = a.expander_, eb = b.expander_;
  return TensorField(a.rank_, a.dim_, [ea, eb](const Point& q, int order) {
    LocalTensor t = (*ea)(q, order);
    const LocalTensor u = (*eb)(q, order);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += u[i];
    return t;
  });
}

std::vector<RJet> coordinate_jets(const Point& q, int order) {
  const int n = static_cast<int>(q.size());
  const JetSpace& s = JetSpace::get(n, order);
  std::vector<RJet> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.push_back(RJet::variable(s, i, q[i]));
  return x;
}

LocalTensor zero_local(int rank, int dim, int order) {
  const JetSpace& s = JetSpace::get(dim, order);
  return LocalTensor(rank, dim, CJet(s));
}

Tensor<Complex> values(const LocalTensor& t) {
  Tensor<Complex> v(t.rank(), t.dim());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i].value();
  return v;
}

LocalTensor contract_leading(const LocalTensor& x, const LocalTensor& j) {
  const int k = j.rank();
  const int m = x.rank();
  if (k > m || x.dim() != j.dim()) throw std::invalid_argument("contract_leading: incompatible ranks");
  const std::size_t rest = tensor_size(m - k, x.dim());
  const int order = std::min(x[0].order(), j[0].order());
  LocalTensor out(m - k, x.dim(), CJet(x[0].space(), order));
  for (std::size_t b = 0; b < j.size(); ++b) {
    for (std::size_t r = 0; r < rest; ++r) out[r].add_product(x[b * rest + r], j[b]);
  }
  return out;
}

TensorField contract_leading(const TensorField& x, const TensorField& j) {
  if (x.is_zero() || j.is_zero()) return TensorField::zero(x.rank() - j.rank(), x.dim());
  return TensorField(x.rank() - j.rank(), x.dim(), [x, j](const Point& q, int order) {
    return contract_leading(x.expand(q, order), j.expand(q, order));
  });
}

TensorField multiply(const ScalarField& s, const TensorField& t) {
  if (s.is_zero() || t.is_zero()) return TensorField::zero(t.rank(), t.dim());
  return TensorField(t.rank(), t.dim(), [s, t](const Point& q, int order) {
    const LocalTensor a = s.expand(q, order);
    LocalTensor b = t.expand(q, order);
    for (auto& c : b.data()) c = c * a[0];
    return b;
  });
}

TensorField symmetrized(const TensorField& t) {
  if (t.is_zero() || t.rank() < 2) return t;
  return TensorField(t.rank(), t.dim(), [t](const Point& q, int order) { return symmetrized(t.expand(q, order)); });
}

}  // namespace wue
