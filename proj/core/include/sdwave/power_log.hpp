#pragma once

// Monotone controlling functions of the form c (1+t)^beta log(e+t)^gamma.

#include <string>

namespace sdwave {

class PowerLog {
 public:
  PowerLog() = default;
  PowerLog(double scale, double power, double log_power);

  static PowerLog constant(double c) { return {c, 0.0, 0.0}; }

  [[nodiscard]] double scale() const noexcept { return c_; }
  [[nodiscard]] double power() const noexcept { return beta_; }
  [[nodiscard]] double log_power() const noexcept { return gamma_; }

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] double log_value(double t) const;

  [[nodiscard]] PowerLog scaled(double factor) const { return {c_ * factor, beta_, gamma_}; }
  [[nodiscard]] PowerLog pow(double k) const;
  [[nodiscard]] PowerLog operator*(const PowerLog& o) const;
  [[nodiscard]] PowerLog operator/(const PowerLog& o) const;

  [[nodiscard]] bool is_constant() const noexcept { return beta_ == 0.0 && gamma_ == 0.0; }

  /// Nondecreasing on [0, inf). Holds when beta > 0, or beta = 0 and gamma >= 0,
  /// or beta > 0 dominates a negative log power from t = 0 on.
  [[nodiscard]] bool is_nondecreasing() const;
  [[nodiscard]] bool is_unbounded() const;

  /// Value at infinity (the constant when bounded, +inf otherwise, 0 when decaying).
  [[nodiscard]] double limit() const;

  /// Smallest t >= 0 with f(t) >= s; 0 when s <= f(0), +inf when s exceeds
  /// sup f. Closed form for pure powers and pure logs, bisection otherwise.
  [[nodiscard]] double inverse(double s) const;

  /// Integral of f^{-m} over [t, inf). +inf when the integrand is not
  /// integrable. For mixed power-log forms this is an upper bound: Gauss-Kronrod
  /// on [t, S] with S = max(10 t, t + 10) plus a monotone analytic tail bound.
  [[nodiscard]] double tail_integral_inverse_power(double t, int m) const;

  /// Integral of 1/f over [0, t]. Closed form for pure powers.
  [[nodiscard]] double integral_inverse(double t) const;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const PowerLog&, const PowerLog&) = default;

 private:
  double c_ = 1.0;
  double beta_ = 0.0;
  double gamma_ = 0.0;
};

/// log(e + t).
double log_e_plus(double t);

/// Upper bound for the integral of (1+s)^{-b} log(e+s)^{c} over [S, inf).
double power_log_tail_bound(double S, double b, double c);

}  // namespace sdwave
