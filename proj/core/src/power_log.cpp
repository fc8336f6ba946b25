#include "sdwave/power_log.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sdwave/quadrature.hpp"

namespace sdwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// min over t >= 0 of (e+t) log(e+t) / (1+t); used to decide monotonicity of
// (1+t)^beta log(e+t)^gamma with beta > 0 > gamma.
double min_log_ratio() {
  static const double value = [] {
    double best = std::numbers::e;
    for (int i = 0; i <= 20000; ++i) {
      const double t = 1e-3 * i;
      best = std::min(best, (std::numbers::e + t) * log_e_plus(t) / (1.0 + t));
    }
    return best * (1.0 - 1e-6);
  }();
  return value;
}

}  // namespace

double log_e_plus(double t) { return std::log(std::numbers::e + t); }

PowerLog::PowerLog(double scale, double power, double log_power)
    : c_(scale), beta_(power), gamma_(log_power) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("PowerLog scale must be positive and finite");
  }
}

double PowerLog::operator()(double t) const {
  if (t == kInf) return limit();
  return c_ * std::pow(1.0 + t, beta_) * std::pow(log_e_plus(t), gamma_);
}

double PowerLog::log_value(double t) const {
  return std::log(c_) + beta_ * std::log1p(t) + gamma_ * std::log(log_e_plus(t));
}

PowerLog PowerLog::pow(double k) const { return {std::pow(c_, k), beta_ * k, gamma_ * k}; }

PowerLog PowerLog::operator*(const PowerLog& o) const {
  return {c_ * o.c_, beta_ + o.beta_, gamma_ + o.gamma_};
}

PowerLog PowerLog::operator/(const PowerLog& o) const {
  return {c_ / o.c_, beta_ - o.beta_, gamma_ - o.gamma_};
}

bool PowerLog::is_nondecreasing() const {
  if (beta_ == 0.0) return gamma_ >= 0.0;
  if (beta_ < 0.0) return false;
  return gamma_ >= 0.0 || beta_ * min_log_ratio() >= -gamma_;
}

bool PowerLog::is_unbounded() const { return beta_ > 0.0 || (beta_ == 0.0 && gamma_ > 0.0); }

double PowerLog::limit() const {
  if (is_unbounded()) return kInf;
  if (is_constant()) return c_;
  return 0.0;
}

double PowerLog::inverse(double s) const {
  if (!is_nondecreasing()) throw std::domain_error("inverse of a non-monotone PowerLog");
  if (s <= (*this)(0.0)) return 0.0;
  if (!is_unbounded()) return kInf;
  if (gamma_ == 0.0) return std::pow(s / c_, 1.0 / beta_) - 1.0;
  if (beta_ == 0.0) return std::exp(std::pow(s / c_, 1.0 / gamma_)) - std::numbers::e;

  // Bisection in u = log(1+t); f is increasing in u.
  const double target = std::log(s);
  double lo = 0.0;
  double hi = 1.0;
  while (log_value(std::expm1(hi)) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) return kInf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_value(std::expm1(mid)) < target ? lo : hi) = mid;
  }
  return std::expm1(0.5 * (lo + hi));
}

double power_log_tail_bound(double S, double b, double c) {
  const double L = log_e_plus(S);
  if (b > 1.0) {
    const double margin = (b - 1.0) - std::max(c, 0.0) / L;
    if (margin <= 0.0) return kInf;
    return std::pow(1.0 + S, 1.0 - b) * std::pow(L, c) / margin;
  }
  if (b == 1.0 && c < -1.0) {
    // (1+s)^{-1} <= ((e+S)/(1+S)) (e+s)^{-1} and d/ds L^{c+1} = (c+1) L^c / (e+s).
    return (std::numbers::e + S) / (1.0 + S) * std::pow(L, c + 1.0) / (-c - 1.0);
  }
  return kInf;
}

double PowerLog::tail_integral_inverse_power(double t, int m) const {
  if (m < 1) throw std::invalid_argument("tail integral needs m >= 1");
  if (t == kInf) return 0.0;
  const double b = m * beta_;
  const double c = -m * gamma_;
  const double pre = std::pow(c_, -m);
  if (b < 1.0 || (b == 1.0 && c >= -1.0)) return kInf;
  if (gamma_ == 0.0) return pre * std::pow(1.0 + t, 1.0 - b) / (b - 1.0);

  double S = std::max(10.0 * t, t + 10.0);
  while (!std::isfinite(power_log_tail_bound(S, b, c)) && S < 1e300) S *= 10.0;
  // Substitution u = log(1+s) tames the long interval.
  const auto integrand = [&](double u) {
    const double s = std::expm1(u);
    return std::exp((1.0 - b) * u) * std::pow(log_e_plus(s), c);
  };
  const double lo = std::log1p(t);
  const double hi = std::log1p(S);
  double body = 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(hi - lo)));
  for (int i = 0; i < pieces; ++i) {
    body += integrate(integrand, lo + (hi - lo) * i / pieces, lo + (hi - lo) * (i + 1) / pieces);
  }
  return pre * (body + power_log_tail_bound(S, b, c));
}

double PowerLog::integral_inverse(double t) const {
  if (t == kInf) return tail_integral_inverse_power(0.0, 1);
  if (gamma_ == 0.0) {
    if (beta_ == 1.0) return std::log1p(t) / c_;
    return (std::pow(1.0 + t, 1.0 - beta_) - 1.0) / ((1.0 - beta_) * c_);
  }
  const auto integrand = [&](double u) {
    const double s = std::expm1(u);
    return std::exp(u) / (*this)(s);
  };
  const double hi = std::log1p(t);
  const int pieces = std::max(1, static_cast<int>(std::ceil(hi)));
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) total += integrate(integrand, hi * i / pieces, hi * (i + 1) / pieces);
  return total;
}

std::string PowerLog::describe() const {
  return fmt::format("{:g}*(1+t)^{:g}*log(e+t)^{:g}", c_, beta_, gamma_);
}

}  // namespace sdwave
