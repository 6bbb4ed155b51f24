#include "wue/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wue/error.hpp"

namespace wue {

// ---------------------------------------------------------------------------
// JetSpace

namespace {

void enumerate_degree(int vars, int degree, int var, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (var == vars - 1) {
    current[static_cast<std::size_t>(var)] = degree;
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate_degree(vars, degree - e, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

std::uint64_t JetSpace::pack(std::span<const int> e) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < e.size(); ++i) key |= static_cast<std::uint64_t>(e[i]) << (8 * i);
  return key;
}

JetSpace::JetSpace(int vars, int order) : vars_(vars), order_(order) {
  offsets_.push_back(0);
  std::vector<int> current(static_cast<std::size_t>(vars), 0);
  for (int d = 0; d <= order; ++d) {
    std::vector<std::vector<int>> mons;
    enumerate_degree(vars, d, 0, current, mons);
    for (const auto& m : mons) {
      double w = 1.0;
      for (int e : m) {
        exponents_.push_back(static_cast<std::uint8_t>(e));
        w *= factorial(e);
      }
      lookup_.emplace_back(pack(m), static_cast<std::uint32_t>(degree_.size()));
      degree_.push_back(d);
      weight_.push_back(w);
    }
    offsets_.push_back(degree_.size());
  }
  std::sort(lookup_.begin(), lookup_.end());

  std::vector<int> sum(static_cast<std::size_t>(vars));
  std::vector<std::vector<Product>> by_degree(static_cast<std::size_t>(order) + 1);
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = 0; b < size_upto(order - degree_[a]); ++b) {
      auto ea = exponents(a);
      auto eb = exponents(b);
      for (int i = 0; i < vars; ++i) sum[static_cast<std::size_t>(i)] = ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)];
      const std::size_t c = index(sum);
      by_degree[static_cast<std::size_t>(degree_[c])].push_back(
          {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)});
    }
  }
  for (const auto& group : by_degree) {
    products_.insert(products_.end(), group.begin(), group.end());
    product_offsets_.push_back(products_.size());
  }
}

const JetSpace& JetSpace::get(int vars, int order) {
  if (vars < 1 || vars > kMaxVars) throw std::invalid_argument("JetSpace: unsupported variable count " + std::to_string(vars));
  if (order < 0 || order > kMaxOrder) throw UnsupportedOrder("JetSpace: unsupported order " + std::to_string(order));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{vars, order}];
  if (!slot) slot.reset(new JetSpace(vars, order));
  return *slot;
}

std::size_t JetSpace::index(std::span<const int> e) const {
  int d = 0;
  for (int v : e) {
    if (v < 0) throw std::invalid_argument("JetSpace: negative exponent");
    d += v;
  }
  if (d > order_) throw UnsupportedOrder("JetSpace: monomial degree " + std::to_string(d) + " exceeds order " + std::to_string(order_));
  const std::uint64_t key = pack(e);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(key, std::uint32_t{0}));
  return it->second;
}

// ---------------------------------------------------------------------------
// Jet

template <class T>
Jet<T>::Jet(const JetSpace& space, int order)
    : space_(&space), order_(order < 0 ? space.order() : std::min(order, space.order())),
      c_(space.size_upto(order_), T{}) {}

template <class T>
Jet<T> Jet<T>::constant(const JetSpace& space, T value, int order) {
  Jet r(space, order);
  r.c_[0] = value;
  return r;
}

template <class T>
Jet<T> Jet<T>::variable(const JetSpace& space, int var, T value, int order) {
  Jet r(space, order);
  r.c_[0] = value;
  if (r.order_ >= 1) r.c_[1 + static_cast<std::size_t>(var)] = T(1);
  return r;
}

template <class T>
T Jet<T>::coefficient(std::span<const int> exponents) const {
  int d = 0;
  for (int e : exponents) d += e;
  if (d > order_) return T{};
  return c_[space_->index(exponents)];
}

template <class T>
T Jet<T>::partial(std::span<const int> indices) const {
  std::vector<int> e(static_cast<std::size_t>(space_->vars()), 0);
  for (int i : indices) ++e[static_cast<std::size_t>(i)];
  if (static_cast<int>(indices.size()) > order_) {
    throw UnsupportedOrder("Jet::partial: derivative order " + std::to_string(indices.size()) +
                           " exceeds jet order " + std::to_string(order_));
  }
  const std::size_t idx = space_->index(e);
  return c_[idx] * space_->factorial_weight(idx);
}

template <class T>
Jet<T> Jet<T>::truncated(int order) const {
  Jet r(*space_, std::min(order, order_));
  std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
  return r;
}

template <class T>
Jet<T> Jet<T>::derivative(int var) const {
  Jet r(*space_, std::max(order_ - 1, 0));
  if (order_ == 0) return r;
  std::vector<int> e(static_cast<std::size_t>(space_->vars()));
  for (std::size_t i = 0; i < r.c_.size(); ++i) {
    auto ex = space_->exponents(i);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = ex[k];
    const int n = ++e[static_cast<std::size_t>(var)];
    r.c_[i] = c_[space_->index(e)] * static_cast<double>(n);
  }
  return r;
}

template <class T>
Jet<T> Jet<T>::scaled_argument(double s) const {
  Jet r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] *= std::pow(s, space_->degree(i));
  return r;
}

template <class T>
Jet<T> Jet<T>::operator-() const {
  Jet r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

template <class T>
Jet<T>& Jet<T>::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  const int ord = std::min(a.order(), b.order());
  Jet<T> r(a.space(), ord);
  auto ca = a.coefficients();
  auto cb = b.coefficients();
  auto cr = r.coefficients();
  for (const auto& p : a.space().products(ord)) cr[p.c] += ca[p.a] * cb[p.b];
  return r;
}

template <class T>
void Jet<T>::add_product(const Jet& a, const Jet& b) {
  const int ord = std::min({order_, a.order_, b.order_});
  if (ord < order_) *this = truncated(ord);
  for (const auto& p : space_->products(ord)) c_[p.c] += a.c_[p.a] * b.c_[p.b];
}

template <class T>
Jet<T>& Jet<T>::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator/=(const Jet& o) {
  const T b0 = o.value();
  if (b0 == T{}) throw std::domain_error("Jet: division by a jet with zero value");
  std::vector<T> taylor(static_cast<std::size_t>(o.order()) + 1);
  T p = T(1) / b0;
  for (auto& t : taylor) {
    t = p;
    p *= -T(1) / b0;
  }
  *this *= compose_univariate(o, std::span<const T>(taylor));
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator+=(T s) {
  c_[0] += s;
  return *this;
}
template <class T>
Jet<T>& Jet<T>::operator-=(T s) {
  c_[0] -= s;
  return *this;
}
template <class T>
Jet<T>& Jet<T>::operator*=(T s) {
  for (auto& v : c_) v *= s;
  return *this;
}
template <class T>
Jet<T>& Jet<T>::operator/=(T s) {
  for (auto& v : c_) v /= s;
  return *this;
}

template <class T>
double Jet<T>::norm_inf() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

template <class T>
Jet<T> operator/(T s, const Jet<T>& a) {
  Jet<T> one = Jet<T>::constant(a.space(), s, a.order());
  return one / a;
}

template <class T>
Jet<T> compose_univariate(const Jet<T>& u, std::span<const T> taylor) {
  const int k_max = std::min(static_cast<int>(taylor.size()) - 1, u.order());
  Jet<T> delta = u;
  delta[0] = T{};
  Jet<T> r = Jet<T>::constant(u.space(), taylor[static_cast<std::size_t>(k_max)], u.order());
  for (int k = k_max - 1; k >= 0; --k) {
    r = r * delta;
    r[0] += taylor[static_cast<std::size_t>(k)];
  }
  return r;
}

template <class T>
Jet<T> compose(const Jet<T>& f, std::span<const RJet> subs) {
  const JetSpace& src = f.space();
  if (static_cast<int>(subs.size()) != src.vars()) throw std::invalid_argument("compose: substitution count mismatch");
  const JetSpace& dst = subs[0].space();
  int ord = f.order();
  for (const auto& s : subs) {
    if (&s.space() != &dst) throw std::invalid_argument("compose: substitutions live in different spaces");
    if (s.value() != 0.0) throw std::invalid_argument("compose: substitution with nonzero constant term");
    ord = std::min(ord, s.order());
  }
  // Monomial values are built from a parent monomial times one substitution.
  // Source monomials of degree > ord contribute nothing.
  const std::size_t n_src = src.size_upto(std::min(ord, f.order()));
  std::vector<RJet> mono;
  mono.reserve(n_src);
  Jet<T> r(dst, ord);
  r[0] = f.value();
  mono.push_back(RJet::constant(dst, 1.0, ord));
  std::vector<int> e(static_cast<std::size_t>(src.vars()));
  for (std::size_t m = 1; m < n_src; ++m) {
    auto ex = src.exponents(m);
    int var = 0;
    for (int i = 0; i < src.vars(); ++i) {
      e[static_cast<std::size_t>(i)] = ex[static_cast<std::size_t>(i)];
      if (ex[static_cast<std::size_t>(i)] > 0) var = i;
    }
    --e[static_cast<std::size_t>(var)];
    const std::size_t parent = src.index(e);
    mono.push_back(mono[parent] * subs[static_cast<std::size_t>(var)].truncated(ord));
    const T c = f[m];
    if (c == T{}) continue;
    auto cm = mono.back().coefficients();
    for (std::size_t i = 0; i < cm.size(); ++i) r[i] += c * cm[i];
  }
  return r;
}

template class Jet<double>;
template class Jet<Complex>;
template Jet<double> operator*(const Jet<double>&, const Jet<double>&);
template Jet<Complex> operator*(const Jet<Complex>&, const Jet<Complex>&);
template Jet<double> operator/(double, const Jet<double>&);
template Jet<Complex> operator/(Complex, const Jet<Complex>&);
template Jet<double> compose_univariate(const Jet<double>&, std::span<const double>);
template Jet<Complex> compose_univariate(const Jet<Complex>&, std::span<const Complex>);
template Jet<double> compose(const Jet<double>&, std::span<const RJet>);
template Jet<Complex> compose(const Jet<Complex>&, std::span<const RJet>);

// ---------------------------------------------------------------------------
// Real/complex conversion

CJet to_complex(const RJet& a) {
  CJet r(a.space(), a.order());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  return r;
}

RJet real_part(const CJet& a) {
  RJet r(a.space(), a.order());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].real();
  return r;
}

RJet imag_part(const CJet& a) {
  RJet r(a.space(), a.order());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].imag();
  return r;
}

CJet operator*(const CJet& a, const RJet& b) { return a * to_complex(b); }
CJet operator*(const RJet& a, const CJet& b) { return to_complex(a) * b; }

// ---------------------------------------------------------------------------
// Elementary functions

namespace {

std::vector<double> taylor_buffer(const RJet& u) { return std::vector<double>(static_cast<std::size_t>(u.order()) + 1); }

// Truncated univariate series helpers (coefficients in t = x - x0).
std::vector<double> series_recip(const std::vector<double>& a) {
  std::vector<double> r(a.size(), 0.0);
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
    r[k] = -s / a[0];
  }
  return r;
}

// Taylor coefficients at v0 of g(v) = sum_j a_j v^j.
std::vector<double> shifted_power_series(const std::vector<double>& a, double v0, int order) {
  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double s = 0.0;
    for (std::size_t j = static_cast<std::size_t>(k); j < a.size(); ++j) {
      double binom = 1.0;
      for (int i = 0; i < k; ++i) binom *= static_cast<double>(j - static_cast<std::size_t>(i)) / (i + 1);
      s += a[j] * binom * std::pow(v0, static_cast<double>(j) - k);
    }
    out[static_cast<std::size_t>(k)] = s;
  }
  return out;
}

}  // namespace

RJet exp(const RJet& u) {
  auto t = taylor_buffer(u);
  double f = std::exp(u.value());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = f;
    f /= static_cast<double>(k + 1);
  }
  return compose_univariate(u, std::span<const double>(t));
}

CJet exp(const CJet& u) {
  std::vector<Complex> t(static_cast<std::size_t>(u.order()) + 1);
  Complex f = std::exp(u.value());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = f;
    f /= static_cast<double>(k + 1);
  }
  return compose_univariate(u, std::span<const Complex>(t));
}

RJet log(const RJet& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw std::domain_error("log: non-positive argument");
  auto t = taylor_buffer(u);
  t[0] = std::log(u0);
  for (std::size_t k = 1; k < t.size(); ++k) t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * std::pow(u0, static_cast<double>(k)));
  return compose_univariate(u, std::span<const double>(t));
}

RJet pow(const RJet& u, double a) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw std::domain_error("pow: non-positive base");
  auto t = taylor_buffer(u);
  double c = std::pow(u0, a);
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = c;
    c *= (a - static_cast<double>(k)) / (static_cast<double>(k + 1) * u0);
  }
  return compose_univariate(u, std::span<const double>(t));
}

RJet pow(const RJet& u, int n) {
  if (n < 0) return 1.0 / pow(u, -n);
  RJet r = RJet::constant(u.space(), 1.0, u.order());
  RJet base = u;
  while (n > 0) {
    if (n & 1) r *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

RJet sqrt(const RJet& u) { return pow(u, 0.5); }

RJet sin(const RJet& u) {
  auto t = taylor_buffer(u);
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const double cycle[4] = {s, c, -s, -c};
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = cycle[k % 4] / fact;
  }
  return compose_univariate(u, std::span<const double>(t));
}

RJet cos(const RJet& u) {
  auto t = taylor_buffer(u);
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const double cycle[4] = {c, -s, -c, s};
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = cycle[k % 4] / fact;
  }
  return compose_univariate(u, std::span<const double>(t));
}

RJet tan(const RJet& u) { return sin(u) / cos(u); }

RJet atan(const RJet& u) {
  const double x0 = u.value();
  const std::size_t n = static_cast<std::size_t>(u.order()) + 1;
  // d/dx atan = 1 / (1 + x^2); integrate the series of the derivative.
  std::vector<double> denom(n, 0.0);
  denom[0] = 1.0 + x0 * x0;
  if (n > 1) denom[1] = 2.0 * x0;
  if (n > 2) denom[2] = 1.0;
  const auto deriv = series_recip(denom);
  std::vector<double> t(n);
  t[0] = std::atan(x0);
  for (std::size_t k = 1; k < n; ++k) t[k] = deriv[k - 1] / static_cast<double>(k);
  return compose_univariate(u, std::span<const double>(t));
}

RJet atan2(const RJet& y, const RJet& x) {
  const double y0 = y.value(), x0 = x.value();
  const double r0 = std::hypot(x0, y0);
  if (r0 == 0.0) throw std::domain_error("atan2: both arguments vanish");
  const double theta0 = std::atan2(y0, x0);
  // Rotate by -theta0 so the argument of atan is small.
  const double c = x0 / r0, s = y0 / r0;
  RJet xr = x * c + y * s;
  RJet yr = y * c - x * s;
  RJet r = atan(yr / xr);
  r[0] += theta0;
  return r;
}

RJet acos(const RJet& u) {
  const double u0 = u.value();
  if (!(std::abs(u0) < 1.0)) throw std::domain_error("acos: argument outside (-1, 1)");
  return atan2(sqrt(1.0 - u * u), u);
}

RJet sinc_sqrt(const RJet& u) {
  const double v0 = u.value();
  if (std::abs(v0) < 4.0) {
    std::vector<double> a(40);
    double fact = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j > 0) fact *= static_cast<double>((2 * j) * (2 * j + 1));
      a[j] = ((j % 2 == 0) ? 1.0 : -1.0) / fact;
    }
    const auto t = shifted_power_series(a, v0, u.order());
    return compose_univariate(u, std::span<const double>(t));
  }
  if (v0 < 0.0) throw std::domain_error("sinc_sqrt: argument below -4 unsupported");
  RJet s = sqrt(u);
  return sin(s) / s;
}

RJet cos_sqrt(const RJet& u) {
  const double v0 = u.value();
  if (std::abs(v0) < 4.0) {
    std::vector<double> a(40);
    double fact = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j > 0) fact *= static_cast<double>((2 * j - 1) * (2 * j));
      a[j] = ((j % 2 == 0) ? 1.0 : -1.0) / fact;
    }
    const auto t = shifted_power_series(a, v0, u.order());
    return compose_univariate(u, std::span<const double>(t));
  }
  if (v0 < 0.0) throw std::domain_error("cos_sqrt: argument below -4 unsupported");
  return cos(sqrt(u));
}

CJet expi(const RJet& u) {
  RJet c = cos(u), s = sin(u);
  CJet r(u.space(), u.order());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = Complex(c[i], s[i]);
  return r;
}

}  // namespace wue
