#pragma once

// Dense tensors with all indices ranging over the same dimension.  Used
// both for pointwise values (Tensor<Complex>) and for local expansions
// (Tensor<CJet>, Tensor<RJet>).

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "wue/jet.hpp"

namespace wue {

/// Number of entries of a rank-r tensor in dimension n.
inline std::size_t tensor_size(int rank, int dim) {
  std::size_t s = 1;
  for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(dim);
  return s;
}

/// Multi-index of a flat position (first index most significant).
inline std::vector<int> unflatten(std::size_t flat, int rank, int dim) {
  std::vector<int> idx(static_cast<std::size_t>(rank));
  for (int i = rank - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(dim));
    flat /= static_cast<std::size_t>(dim);
  }
  return idx;
}

inline std::size_t flatten(std::span<const int> idx, int dim) {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return f;
}

/// Flat positions of all index permutations of `flat`, including itself.
inline std::vector<std::size_t> permutation_orbit(std::size_t flat, int rank, int dim) {
  auto idx = unflatten(flat, rank, dim);
  std::sort(idx.begin(), idx.end());
  std::vector<std::size_t> out;
  do {
    out.push_back(flatten(idx, dim));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rank, int dim, T fill = T{}) : rank_(rank), dim_(dim), data_(tensor_size(rank, dim), fill) {}

  int rank() const noexcept { return rank_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator[](std::size_t flat) noexcept { return data_[flat]; }
  const T& operator[](std::size_t flat) const noexcept { return data_[flat]; }
  T& at(std::span<const int> idx) { return data_[flatten(idx, dim_)]; }
  const T& at(std::span<const int> idx) const { return data_[flatten(idx, dim_)]; }
  T& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const T& at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  template <class F>
  auto map(F&& f) const {
    using U = decltype(f(data_[0]));
    Tensor<U> r(rank_, dim_);
    for (std::size_t i = 0; i < data_.size(); ++i) r[i] = f(data_[i]);
    return r;
  }

 private:
  int rank_ = 0;
  int dim_ = 1;
  std::vector<T> data_ = std::vector<T>(1);
};

/// Average over all index permutations.
template <class T>
Tensor<T> symmetrized(const Tensor<T>& t) {
  Tensor<T> r = t;
  std::vector<bool> done(t.size(), false);
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (done[f]) continue;
    const auto orbit = permutation_orbit(f, t.rank(), t.dim());
    T sum = t[orbit[0]];
    for (std::size_t k = 1; k < orbit.size(); ++k) sum += t[orbit[k]];
    sum *= 1.0 / static_cast<double>(orbit.size());
    for (auto o : orbit) {
      r[o] = sum;
      done[o] = true;
    }
  }
  return r;
}

/// Largest |T_{..i..j..} - T_{..j..i..}| over all index permutations.
inline double symmetry_defect(const Tensor<Complex>& t) {
  double d = 0.0;
  for (std::size_t f = 0; f < t.size(); ++f)
    for (auto o : permutation_orbit(f, t.rank(), t.dim())) d = std::max(d, std::abs(t[f] - t[o]));
  return d;
}

inline double max_abs(const Tensor<Complex>& t) {
  double m = 0.0;
  for (const auto& v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

/// Full contraction sum_I a_I b_I of two tensors of equal shape.
inline Complex contract_full(const Tensor<Complex>& a, const Tensor<Complex>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("contract_full: shape mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Contraction of the symmetric tensor x with the vector p in every slot.
inline Complex contract_with_vector(const Tensor<Complex>& x, std::span<const double> p) {
  Complex s = 0.0;
  for (std::size_t f = 0; f < x.size(); ++f) {
    const auto idx = unflatten(f, x.rank(), x.dim());
    double w = 1.0;
    for (int i : idx) w *= p[static_cast<std::size_t>(i)];
    s += x[f] * w;
  }
  return s;
}

}  // namespace wue
