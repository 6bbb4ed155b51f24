#include "wue/finite_difference.hpp"

#include <cmath>
#include <vector>

namespace wue {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Plain central difference with spacing h for the given exponents.
Complex central(const ComplexFunction& f, const Point& q, std::span<const int> e, double h) {
  const int n = static_cast<int>(e.size());
  int total = 0;
  for (int v : e) total += v;
  // Iterate over the tensor-product stencil.
  std::vector<int> j(static_cast<std::size_t>(n), 0);
  Complex sum = 0.0;
  while (true) {
    Point x = q;
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const int m = e[static_cast<std::size_t>(i)];
      const int ji = j[static_cast<std::size_t>(i)];
      x[i] += (ji - 0.5 * m) * h;
      w *= (((m - ji) % 2 == 0) ? 1.0 : -1.0) * binomial(m, ji);
    }
    sum += w * f(x);
    int i = 0;
    for (; i < n; ++i) {
      if (++j[static_cast<std::size_t>(i)] <= e[static_cast<std::size_t>(i)]) break;
      j[static_cast<std::size_t>(i)] = 0;
    }
    if (i == n) break;
  }
  return sum / std::pow(h, total);
}

}  // namespace

Complex fd_partial(const ComplexFunction& f, const Point& q, std::span<const int> exponents,
                   const FiniteDifferenceOptions& options) {
  int total = 0;
  for (int v : exponents) total += v;
  if (total == 0) return f(q);
  const double h0 = options.step * total;
  std::vector<Complex> table;
  for (int l = 0; l <= options.levels; ++l) table.push_back(central(f, q, exponents, h0 / std::pow(2.0, l)));
  // Error expansion in even powers of h.
  for (int l = 1; l <= options.levels; ++l) {
    const double factor = std::pow(4.0, l);
    for (int i = options.levels; i >= l; --i) table[static_cast<std::size_t>(i)] =
        (factor * table[static_cast<std::size_t>(i)] - table[static_cast<std::size_t>(i - 1)]) / (factor - 1.0);
  }
  return table.back();
}

Tensor<Complex> fd_derivative_tensor(const ComplexFunction& f, const Point& q, int k,
                                     const FiniteDifferenceOptions& options) {
  const int n = static_cast<int>(q.size());
  Tensor<Complex> out(k, n);
  std::vector<bool> done(out.size(), false);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    if (done[flat]) continue;
    const auto idx = unflatten(flat, k, n);
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int i : idx) ++e[static_cast<std::size_t>(i)];
    const Complex v = fd_partial(f, q, e, options);
    for (auto o : permutation_orbit(flat, k, n)) {
      out[o] = v;
      done[o] = true;
    }
  }
  return out;
}

}  // namespace wue
