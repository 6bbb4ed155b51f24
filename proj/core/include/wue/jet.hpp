#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A Jet<T> stores the Taylor coefficients of a function of `vars` variables
// around the origin, up to a total degree.  Arithmetic and elementary
// functions propagate the coefficients exactly (up to rounding), which is
// how every derivative in the library is obtained.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace wue {

using Complex = std::complex<double>;

/// Monomial layout for jets in `vars` variables up to total degree `order`.
/// Monomials are graded by degree, so the coefficients of degree <= d form a
/// prefix of the coefficient vector.  Instances are cached and immutable.
class JetSpace {
 public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxOrder = 12;

  static const JetSpace& get(int vars, int order);

  int vars() const noexcept { return vars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return degree_.size(); }
  /// Number of monomials with total degree <= d.
  std::size_t size_upto(int d) const noexcept { return offsets_[static_cast<std::size_t>(d) + 1]; }
  int degree(std::size_t i) const noexcept { return degree_[i]; }
  std::span<const std::uint8_t> exponents(std::size_t i) const noexcept {
    return {exponents_.data() + i * static_cast<std::size_t>(vars_), static_cast<std::size_t>(vars_)};
  }
  /// Index of the monomial with the given exponents.  Throws if the degree
  /// exceeds the space order.
  std::size_t index(std::span<const int> exponents) const;
  /// Product of the monomial factorials e_1! e_2! ... (derivative scale).
  double factorial_weight(std::size_t i) const noexcept { return weight_[i]; }

  struct Product {
    std::uint32_t a, b, c;
  };
  /// Monomial products a*b = c with degree(c) <= d.
  std::span<const Product> products(int d) const noexcept {
    return {products_.data(), product_offsets_[static_cast<std::size_t>(d)]};
  }

 private:
  JetSpace(int vars, int order);
  static std::uint64_t pack(std::span<const int> e);

  int vars_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<double> weight_;
  std::vector<std::size_t> offsets_;
  std::vector<Product> products_;
  std::vector<std::size_t> product_offsets_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup_;  // sorted by key
};

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() = default;
  /// Zero jet of the given order (order < 0 means the space order).
  explicit Jet(const JetSpace& space, int order = -1);

  static Jet constant(const JetSpace& space, T value, int order = -1);
  /// The coordinate function x_var shifted by `value`.
  static Jet variable(const JetSpace& space, int var, T value = T{}, int order = -1);

  bool valid() const noexcept { return space_ != nullptr; }
  const JetSpace& space() const noexcept { return *space_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return c_.size(); }

  T value() const noexcept { return c_[0]; }
  T operator[](std::size_t i) const noexcept { return c_[i]; }
  T& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const T> coefficients() const noexcept { return c_; }
  std::span<T> coefficients() noexcept { return c_; }

  /// Taylor coefficient of the monomial with the given exponents (0 if the
  /// degree exceeds the jet order).
  T coefficient(std::span<const int> exponents) const;
  /// Partial derivative at the origin; `indices` lists the variables
  /// differentiated, e.g. {0, 0, 1} for d^3/dx0^2 dx1.
  T partial(std::span<const int> indices) const;

  Jet truncated(int order) const;
  /// d/dx_var; the order drops by one.
  Jet derivative(int var) const;
  /// f(x) -> f(s x).
  Jet scaled_argument(double s) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(T s);
  Jet& operator-=(T s);
  Jet& operator*=(T s);
  Jet& operator/=(T s);

  /// Accumulate a * b into *this without allocating a temporary.
  void add_product(const Jet& a, const Jet& b);

  /// Largest coefficient magnitude.
  double norm_inf() const;

 private:
  const JetSpace* space_ = nullptr;
  int order_ = 0;
  std::vector<T> c_;

  template <class U>
  friend class Jet;
};

using RJet = Jet<double>;
using CJet = Jet<Complex>;

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) { return a += b; }
template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) { return a -= b; }
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b);
template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) { Jet<T> r = a; return r /= b; }

template <class T>
Jet<T> operator+(Jet<T> a, T s) { return a += s; }
template <class T>
Jet<T> operator+(T s, Jet<T> a) { return a += s; }
template <class T>
Jet<T> operator-(Jet<T> a, T s) { return a -= s; }
template <class T>
Jet<T> operator-(T s, const Jet<T>& a) { Jet<T> r = -a; return r += s; }
template <class T>
Jet<T> operator*(Jet<T> a, T s) { return a *= s; }
template <class T>
Jet<T> operator*(T s, Jet<T> a) { return a *= s; }
template <class T>
Jet<T> operator/(Jet<T> a, T s) { return a /= s; }
template <class T>
Jet<T> operator/(T s, const Jet<T>& a);

// Real scalars on complex jets.
inline CJet operator*(CJet a, double s) { return a *= Complex(s); }
inline CJet operator*(double s, CJet a) { return a *= Complex(s); }
inline CJet operator+(CJet a, double s) { return a += Complex(s); }

CJet to_complex(const RJet& a);
RJet real_part(const CJet& a);
RJet imag_part(const CJet& a);
CJet operator*(const CJet& a, const RJet& b);
CJet operator*(const RJet& a, const CJet& b);

/// Compose with a univariate function given by its Taylor coefficients
/// taylor[k] = f^(k)(u0)/k! around u0 = u.value().
template <class T>
Jet<T> compose_univariate(const Jet<T>& u, std::span<const T> taylor);

RJet exp(const RJet& u);
RJet log(const RJet& u);
RJet sqrt(const RJet& u);
RJet pow(const RJet& u, double a);
RJet pow(const RJet& u, int n);
RJet sin(const RJet& u);
RJet cos(const RJet& u);
RJet tan(const RJet& u);
RJet atan(const RJet& u);
RJet atan2(const RJet& y, const RJet& x);
RJet acos(const RJet& u);
/// sin(sqrt(u)) / sqrt(u), analytic at u = 0.
RJet sinc_sqrt(const RJet& u);
/// cos(sqrt(u)), analytic at u = 0.
RJet cos_sqrt(const RJet& u);

CJet exp(const CJet& u);
/// exp(i u) for a real jet u.
CJet expi(const RJet& u);

/// Substitute jets for the variables of f: result(y) = f(subs_0(y), ..., subs_{n-1}(y)).
/// The substitutions must have zero constant term and share one space.
template <class T>
Jet<T> compose(const Jet<T>& f, std::span<const RJet> subs);

}  // namespace wue
