#include "sdwave/speed_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <stdexcept>

namespace sdwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBumpHorizon = 1e15;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

RealJet ipow(RealJet base, int n) {
  RealJet result(base.order(), 1.0);
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

int bump_half_power(int m) { return m + 1; }

void validate_example2(const Example2Params& p) {
  if (p.eta < 3.0) throw std::invalid_argument("example2 needs eta >= 3 for disjoint bumps");
  if (p.m < 2) throw std::invalid_argument("example2 needs m >= 2");
  if (!(p.alpha > 0.0 && p.beta > 0.0 && p.kappa > 0.0)) {
    throw std::invalid_argument("example2 needs positive alpha, beta, kappa");
  }
  constexpr double slack = 1e-12;
  if (p.alpha > p.kappa + slack || p.kappa > 1.0 + slack) {
    throw std::invalid_argument("example2 needs alpha <= kappa <= 1");
  }
  const double lo = p.alpha + (1.0 - p.alpha) / p.m;
  const double hi = p.kappa + (p.kappa - p.alpha) / p.m;
  if (p.beta < lo - slack || p.beta > hi + slack) {
    throw std::invalid_argument(
        fmt::format("example2 needs {:g} <= beta <= {:g}, got {:g}", lo, hi, p.beta));
  }
  if (!(p.amplitude > 0.0)) throw std::invalid_argument("example2 needs a positive bump amplitude");
}

}  // namespace

SpeedProfile::SpeedProfile(Params params) : params_(std::move(params)) {}

SpeedProfile SpeedProfile::constant(const ConstantParams& params) {
  if (!(params.value > 0.0)) throw std::invalid_argument("constant speed must be positive");
  if (params.m < 1) throw std::invalid_argument("smoothness order m must be >= 1");
  SpeedProfile s{params};
  s.m_ = params.m;
  s.a0_ = s.a1_ = s.a_inf_ = params.value;
  s.theta_ = PowerLog::constant(1.0);
  s.xi_ = PowerLog(1.0, 1.0, 0.0);
  return s;
}

SpeedProfile SpeedProfile::example1(const Example1Params& params) {
  const auto& [p, q, r, m, chi] = params;
  if (p < 0.0 || q < 0.0 || r < 0.0) throw std::invalid_argument("example1 needs p, q, r >= 0");
  if (m < 1) throw std::invalid_argument("smoothness order m must be >= 1");
  if (m > kMaxJetOrder) throw std::invalid_argument("derivative order beyond supported jet order");
  if (!(chi.offset - std::abs(chi.amplitude) > 0.0)) {
    throw std::invalid_argument("example1 needs a positive chi (offset > |amplitude|)");
  }
  SpeedProfile s{params};
  s.m_ = m;
  const double chi_min = chi.offset - std::abs(chi.amplitude);
  const double chi_max = chi.offset + std::abs(chi.amplitude);
  const bool frozen = (q == 0.0 && r == 0.0);
  const double chi_frozen = chi.offset + chi.amplitude * std::cos(1.0);
  if (p == 0.0) {
    s.a0_ = 1.0 + (frozen ? chi_frozen : chi_min);
    s.a1_ = 1.0 + (frozen ? chi_frozen : chi_max);
    s.a_inf_ = 1.0 + (frozen ? chi_frozen : chi.offset);
  } else {
    s.a0_ = 1.0;
    s.a1_ = 1.0 + (frozen ? chi_frozen : chi_max);
    s.a_inf_ = 1.0;
  }

  if (p > 1.0) {
    s.theta_ = PowerLog::constant(1.0);
  } else if (p == 1.0) {
    s.theta_ = PowerLog(1.0, 0.0, 1.0);
  } else {
    s.theta_ = PowerLog(1.0, 1.0 - p, 0.0);
  }
  s.xi_ = q > 0.0 ? PowerLog(1.0, p / m - q + 1.0, -r) : PowerLog(1.0, p / m + 1.0, 1.0 - r);

  if (p == 0.0 && q == 0.0 && r >= 1.0) {
    s.lambda_ = PowerLog(1.0, 1.0, 1.0 - r);
  } else if (p < q && q < 1.0 && r == 0.0) {
    s.lambda_ = PowerLog(1.0, 1.0 - q, 0.0);
  }
  return s;
}

SpeedProfile SpeedProfile::example2(const Example2Params& params) {
  validate_example2(params);
  SpeedProfile s{params};
  s.m_ = params.m;
  const double nu_power = params.kappa - params.beta + (params.kappa - params.alpha) / params.m;
  double eps_max = 0.0;
  for (int j = 1;; ++j) {
    const double tj = std::pow(params.eta, j);
    if (tj > kBumpHorizon) break;
    Bump b;
    b.j = j;
    b.center = tj;
    b.radius = std::pow(tj, params.kappa) / params.eta;
    b.eps = std::pow(tj, params.alpha - params.kappa);
    b.nu = static_cast<int>(std::floor(std::pow(tj, nu_power) + 1.0));
    if (!s.bumps_.empty()) {
      const Bump& prev = s.bumps_.back();
      if (prev.center + prev.radius > b.center - b.radius) {
        throw std::invalid_argument(fmt::format("example2 bumps {} and {} overlap", prev.j, b.j));
      }
    }
    eps_max = std::max(eps_max, b.eps);
    s.bumps_.push_back(b);
  }
  s.a0_ = 1.0;
  s.a1_ = std::sqrt(1.0 + params.amplitude * eps_max);
  s.a_inf_ = 1.0;
  s.theta_ = PowerLog(1.0, params.alpha, 0.0);
  s.xi_ = PowerLog(1.0, params.beta, 0.0);
  return s;
}

ProfileFamily SpeedProfile::family() const noexcept {
  return std::visit(Overloaded{[](const ConstantParams&) { return ProfileFamily::constant; },
                               [](const Example1Params&) { return ProfileFamily::example1; },
                               [](const Example2Params&) { return ProfileFamily::example2; }},
                    params_);
}

std::string SpeedProfile::describe() const {
  return std::visit(
      Overloaded{
          [](const ConstantParams& c) { return fmt::format("constant(a={:g}, m={})", c.value, c.m); },
          [](const Example1Params& e) {
            return fmt::format("example1(p={:g}, q={:g}, r={:g}, m={}, chi={:g}+{:g}cos)", e.p, e.q, e.r,
                               e.m, e.chi.offset, e.chi.amplitude);
          },
          [](const Example2Params& e) {
            return fmt::format("example2(eta={:g}, alpha={:g}, beta={:g}, kappa={:g}, m={}, amplitude={:g})",
                               e.eta, e.alpha, e.beta, e.kappa, e.m, e.amplitude);
          }},
      params_);
}

const Bump* SpeedProfile::bump_at(double t) const {
  const auto* e2 = std::get_if<Example2Params>(&params_);
  if (e2 == nullptr || t <= 0.0) return nullptr;
  const int guess = static_cast<int>(std::floor(std::log(t) / std::log(e2->eta)));
  for (int j = std::max(1, guess - 1); j <= guess + 1; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    if (idx >= bumps_.size()) break;
    const Bump& b = bumps_[idx];
    if (std::abs(t - b.center) <= b.radius) return &b;
  }
  return nullptr;
}

int SpeedProfile::max_derivative_order() const noexcept {
  if (const auto* e2 = std::get_if<Example2Params>(&params_)) {
    return std::min(kMaxJetOrder, 2 * bump_half_power(e2->m) - 1);
  }
  return kMaxJetOrder;
}

RealJet SpeedProfile::jet(double t, int order) const {
  if (order > max_derivative_order()) {
    throw std::out_of_range(fmt::format("derivative order {} exceeds the smoothness of {}", order, describe()));
  }
  if (t < 0.0) throw std::domain_error("speed profiles are defined for t >= 0");
  return std::visit(
      Overloaded{
          [&](const ConstantParams& c) { return RealJet(order, c.value); },
          [&](const Example1Params& e) {
            const RealJet T = RealJet::variable(t, order);
            const RealJet one_plus = T + 1.0;
            const RealJet arg = pow(one_plus, e.q) * pow(log(T + std::numbers::e), e.r);
            const RealJet chi = e.chi.offset + e.chi.amplitude * cos(arg);
            return 1.0 + pow(one_plus, -e.p) * chi;
          },
          [&](const Example2Params& e) {
            const Bump* b = bump_at(t);
            if (b == nullptr) return RealJet(order, 1.0);
            const RealJet T = RealJet::variable(t, order);
            const RealJet tau = (kTwoPi * b->nu / b->radius) * (T - b->center);
            const RealJet base = -cos(tau);
            if (base.value() <= 0.0) return RealJet(order, 1.0);
            const RealJet chi = (b->eps * e.amplitude) * ipow(base, 2 * bump_half_power(e.m));
            return sqrt(1.0 + chi);
          }},
      params_);
}

double SpeedProfile::a(double t) const { return jet(t, 0).value(); }

double SpeedProfile::derivative(double t, int k) const {
  if (k < 0) throw std::out_of_range("negative derivative order");
  return jet(t, k).derivative(k);
}

SpeedProfile SpeedProfile::with_theta(const PowerLog& theta) const {
  SpeedProfile s = *this;
  s.theta_ = theta;
  return s;
}

SpeedProfile SpeedProfile::with_xi(const PowerLog& xi) const {
  SpeedProfile s = *this;
  s.xi_ = xi;
  return s;
}

SpeedProfile SpeedProfile::with_lambda(std::optional<PowerLog> lambda) const {
  SpeedProfile s = *this;
  s.lambda_ = lambda;
  return s;
}

SpeedProfile SpeedProfile::with_m(int m) const {
  if (m < 1 || m > max_derivative_order()) throw std::out_of_range("smoothness order out of range");
  SpeedProfile s = *this;
  s.m_ = m;
  return s;
}

std::vector<double> SpeedProfile::breakpoints(double t_end) const {
  std::vector<double> out;
  for (const Bump& b : bumps_) {
    if (b.center - b.radius >= t_end) break;
    // Support edges of max(0, -cos tau) sit at tau = pi/2 + k pi.
    const double period = b.radius / b.nu;
    for (int k = -2 * b.nu; k <= 2 * b.nu; ++k) {
      const double x = b.center + (0.25 + 0.5 * k) * period;
      if (x > b.center - b.radius && x < b.center + b.radius && x > 0.0 && x < t_end) out.push_back(x);
    }
    for (double x : {b.center - b.radius, b.center + b.radius}) {
      if (x > 0.0 && x < t_end) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double SpeedProfile::step_hint(double t) const {
  return std::visit(
      Overloaded{
          [&](const ConstantParams&) { return 0.25 * (1.0 + t); },
          [&](const Example1Params& e) {
            const double L = log_e_plus(t);
            const double darg = std::pow(1.0 + t, e.q - 1.0) * std::pow(L, e.r) *
                                (e.q + e.r * (1.0 + t) / ((std::numbers::e + t) * L));
            double hint = 0.25 * (1.0 + t);
            if (darg > 0.0) hint = std::min(hint, kTwoPi / (8.0 * darg));
            return hint;
          },
          [&](const Example2Params&) {
            if (const Bump* b = bump_at(t)) return b->radius / (b->nu * 16.0);
            return 0.25 * (1.0 + t);
          }},
      params_);
}

std::vector<double> SpeedProfile::check_points(double t_end, int per_feature) const {
  std::vector<double> out;
  for (const Bump& b : bumps_) {
    if (b.center - b.radius >= t_end) break;
    for (int i = 0; i < per_feature; ++i) {
      const double x = b.center - b.radius + 2.0 * b.radius * (i + 0.5) / per_feature;
      if (x < t_end) out.push_back(x);
    }
  }
  return out;
}

double lambda_inverse(const SpeedProfile& profile, double s) {
  if (!profile.lambda()) throw std::invalid_argument("profile has no Lambda");
  const PowerLog& lam = *profile.lambda();
  if (!lam.is_nondecreasing() || !lam.is_unbounded()) {
    throw std::invalid_argument("Lambda must be strictly increasing and unbounded");
  }
  if (s < lam(0.0)) throw std::domain_error(fmt::format("lambda_inverse: s = {:g} < Lambda(0)", s));
  return lam.inverse(s);
}

double theta_of_lambda_inverse(const SpeedProfile& profile, double s) {
  if (!profile.lambda()) throw std::invalid_argument("profile has no Lambda");
  const double t = s <= (*profile.lambda())(0.0) ? 0.0 : lambda_inverse(profile, s);
  return profile.theta()(t);
}

namespace {

double number(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("parameter {} = '{}' is not a number", key, it->second));
  }
  if (used != it->second.size()) {
    throw std::invalid_argument(fmt::format("parameter {} = '{}' is not a number", key, it->second));
  }
  return v;
}

int integer(const std::map<std::string, std::string>& p, const std::string& key, int fallback) {
  const double v = number(p, key, fallback);
  if (v != std::floor(v)) throw std::invalid_argument(fmt::format("parameter {} must be an integer", key));
  return static_cast<int>(v);
}

std::optional<PowerLog> override_powerlog(const std::map<std::string, std::string>& p, const std::string& name) {
  if (!p.contains(name + "_power") && !p.contains(name + "_log_power") && !p.contains(name + "_scale")) {
    return std::nullopt;
  }
  return PowerLog(number(p, name + "_scale", 1.0), number(p, name + "_power", 0.0),
                  number(p, name + "_log_power", 0.0));
}

}  // namespace

SpeedProfile profile_from_params(const std::map<std::string, std::string>& p) {
  auto fam = p.find("family");
  if (fam == p.end()) throw std::invalid_argument("profile needs a family");
  SpeedProfile prof = [&] {
    if (fam->second == "constant") {
      return SpeedProfile::constant({number(p, "value", 1.0), integer(p, "m", 2)});
    }
    if (fam->second == "example1") {
      Example1Params e;
      e.p = number(p, "p", 0.0);
      e.q = number(p, "q", 0.0);
      e.r = number(p, "r", 0.0);
      e.m = integer(p, "m", 2);
      if (auto it = p.find("chi"); it != p.end() && it->second != "cos_offset") {
        throw std::invalid_argument("unknown chi family '" + it->second + "'");
      }
      e.chi.offset = number(p, "chi_offset", 2.0);
      e.chi.amplitude = number(p, "chi_amplitude", 1.0);
      return SpeedProfile::example1(e);
    }
    if (fam->second == "example2") {
      Example2Params e;
      e.eta = number(p, "eta", 3.0);
      e.alpha = number(p, "alpha", 1.0);
      e.beta = number(p, "beta", 1.0);
      e.kappa = number(p, "kappa", 1.0);
      e.m = integer(p, "m", 2);
      e.amplitude = number(p, "amplitude", 0.5);
      return SpeedProfile::example2(e);
    }
    throw std::invalid_argument("unknown profile family '" + fam->second + "'");
  }();

  if (auto t = override_powerlog(p, "theta")) prof = prof.with_theta(*t);
  if (auto x = override_powerlog(p, "xi")) prof = prof.with_xi(*x);
  if (auto it = p.find("lambda"); it != p.end() && it->second == "none") {
    prof = prof.with_lambda(std::nullopt);
  } else if (auto l = override_powerlog(p, "lambda")) {
    prof = prof.with_lambda(*l);
  }
  return prof;
}

}  // namespace sdwave
