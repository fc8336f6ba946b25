#pragma once

// Truncated Taylor series ("jets") in one variable.
//
// A Jet<T> of order n stores the Taylor coefficients c_0..c_n of a function
// about a point, so that f^(k)(t0) = k! * c_k. Arithmetic and the elementary
// functions below apply the product/quotient/chain rules coefficient-wise,
// which gives exact derivatives (up to rounding) of any composition without
// symbolic algebra or finite differences.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <type_traits>

namespace sdwave {

inline constexpr int kMaxJetOrder = 8;

namespace detail {
inline constexpr std::array<double, kMaxJetOrder + 1> kFactorial = {
    1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0};
}  // namespace detail

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() = default;

  explicit Jet(int order, T value = T{}) : order_(order) {
    if (order < 0 || order > kMaxJetOrder) {
      throw std::out_of_range("Jet order must lie in [0, 8]");
    }
    c_[0] = value;
  }

  /// Independent variable t about t0.
  static Jet variable(T t0, int order) {
    Jet j(order, t0);
    if (order >= 1) j.c_[1] = T{1};
    return j;
  }

  static Jet constant(T v, int order) { return Jet(order, v); }

  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] T value() const noexcept { return c_[0]; }

  T operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  T& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  /// k-th derivative at the expansion point.
  [[nodiscard]] T derivative(int k) const {
    if (k > order_) throw std::out_of_range("derivative order exceeds jet order");
    return c_[static_cast<std::size_t>(k)] * detail::kFactorial[static_cast<std::size_t>(k)];
  }

  /// The jet of d/dt f, one order shorter.
  [[nodiscard]] Jet differentiated() const {
    if (order_ == 0) throw std::out_of_range("cannot differentiate an order-0 jet");
    Jet d(order_ - 1);
    for (int k = 0; k < order_; ++k) d[k] = c_[static_cast<std::size_t>(k + 1)] * T(k + 1);
    return d;
  }

  [[nodiscard]] Jet truncated(int order) const {
    Jet r(std::min(order, order_));
    for (int k = 0; k <= r.order_; ++k) r[k] = (*this)[k];
    return r;
  }

  Jet operator-() const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) r[k] = -(*this)[k];
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) r[k] = a[k] + b[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) r[k] = a[k] - b[k];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) {
      T s{};
      for (int i = 0; i <= k; ++i) s += a[i] * b[k - i];
      r[k] = s;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) {
      T s = a[k];
      for (int i = 1; i <= k; ++i) s -= b[i] * r[k - i];
      r[k] = s / b[0];
    }
    return r;
  }

  friend Jet operator+(const Jet& a, T s) {
    Jet r = a;
    r[0] += s;
    return r;
  }
  friend Jet operator+(T s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, T s) { return a + (-s); }
  friend Jet operator-(T s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, T s) {
    Jet r(a.order_);
    for (int k = 0; k <= a.order_; ++k) r[k] = a[k] * s;
    return r;
  }
  friend Jet operator*(T s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, T s) { return a * (T{1} / s); }
  friend Jet operator/(T s, const Jet& a) { return Jet(a.order_, s) / a; }

 private:
  std::array<T, kMaxJetOrder + 1> c_{};
  int order_ = 0;
};

using RealJet = Jet<double>;
using ComplexJet = Jet<std::complex<double>>;

inline ComplexJet to_complex(const RealJet& a) {
  ComplexJet r(a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = a[k];
  return r;
}

inline RealJet real_part(const ComplexJet& a) {
  RealJet r(a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = a[k].real();
  return r;
}

inline RealJet imag_part(const ComplexJet& a) {
  RealJet r(a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = a[k].imag();
  return r;
}

/// Conjugation commutes with d/dt for functions of a real variable.
inline ComplexJet conj(const ComplexJet& a) {
  ComplexJet r(a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = std::conj(a[k]);
  return r;
}

/// |f|^2 = f * conj(f), a smooth real jet even where f vanishes.
inline RealJet abs2(const ComplexJet& a) { return real_part(a * conj(a)); }

inline ComplexJet make_complex(const RealJet& re, const RealJet& im) {
  ComplexJet r(std::min(re.order(), im.order()));
  for (int k = 0; k <= r.order(); ++k) r[k] = {re[k], im[k]};
  return r;
}

inline RealJet exp(const RealJet& a) {
  RealJet e(a.order());
  e[0] = std::exp(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a[i] * e[k - i];
    e[k] = s / k;
  }
  return e;
}

inline RealJet log(const RealJet& a) {
  if (!(a[0] > 0.0)) throw std::domain_error("log of a non-positive jet");
  RealJet l(a.order());
  l[0] = std::log(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int i = 1; i < k; ++i) s += i * l[i] * a[k - i];
    l[k] = (a[k] - s / k) / a[0];
  }
  return l;
}

/// a^alpha for a positive base.
inline RealJet pow(const RealJet& a, double alpha) {
  if (alpha == 0.0) return RealJet(a.order(), 1.0);
  if (!(a[0] > 0.0)) throw std::domain_error("pow of a non-positive jet");
  RealJet p(a.order());
  p[0] = std::pow(a[0], alpha);
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += ((alpha + 1.0) * i - k) * a[i] * p[k - i];
    p[k] = s / (k * a[0]);
  }
  return p;
}

inline RealJet sqrt(const RealJet& a) { return pow(a, 0.5); }

namespace detail {
inline void sin_cos(const RealJet& a, RealJet& s, RealJet& c) {
  s = RealJet(a.order(), std::sin(a[0]));
  c = RealJet(a.order(), std::cos(a[0]));
  for (int k = 1; k <= a.order(); ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (int i = 1; i <= k; ++i) {
      ss += i * a[i] * c[k - i];
      cc += i * a[i] * s[k - i];
    }
    s[k] = ss / k;
    c[k] = -cc / k;
  }
}
}  // namespace detail

inline RealJet sin(const RealJet& a) {
  RealJet s, c;
  detail::sin_cos(a, s, c);
  return s;
}

inline RealJet cos(const RealJet& a) {
  RealJet s, c;
  detail::sin_cos(a, s, c);
  return c;
}

}  // namespace sdwave
