#pragma once

// Propagation speeds a(t) with exact derivatives, bounds a0 <= a <= a1, the
// stabilization constant a_inf and the controlling functions Theta, Xi, Lambda.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdwave/jet.hpp"
#include "sdwave/power_log.hpp"

namespace sdwave {

/// chi(tau) = offset + amplitude * cos(tau); positive when offset > |amplitude|.
struct PeriodicChi {
  double offset = 2.0;
  double amplitude = 1.0;
};

struct ConstantParams {
  double value = 1.0;
  int m = 2;
};

/// a(t) = 1 + (1+t)^{-p} chi((1+t)^q log(e+t)^r).
struct Example1Params {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  int m = 2;
  PeriodicChi chi{};
};

/// Sparse bumps a = sqrt(1 + chi_eps(tau)) on [t_j - rho_j, t_j + rho_j] with
/// t_j = eta^j, eps_j = t_j^{alpha-kappa}, rho_j = t_j^kappa / eta and
/// nu_j = floor(t_j^{kappa - beta + (kappa-alpha)/m} + 1). The bump is
/// chi_eps(tau) = eps * amplitude * max(0, -cos tau)^{2(m+1)}, which vanishes on
/// [-pi/2, pi/2] modulo 2 pi, evaluated at tau = 2 pi nu_j (t - t_j) / rho_j so
/// that every bump holds nu_j whole periods.
struct Example2Params {
  double eta = 3.0;
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 1.0;
  int m = 2;
  double amplitude = 0.5;
};

struct Bump {
  int j = 0;
  double center = 0.0;
  double radius = 0.0;
  double eps = 0.0;
  int nu = 0;
};

enum class ProfileFamily { constant, example1, example2 };

class SpeedProfile {
 public:
  static SpeedProfile constant(const ConstantParams& params);
  static SpeedProfile example1(const Example1Params& params);
  static SpeedProfile example2(const Example2Params& params);

  [[nodiscard]] ProfileFamily family() const noexcept;
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double a(double t) const;
  /// Taylor jet of a about t, exact to rounding.
  [[nodiscard]] RealJet jet(double t, int order) const;
  /// a^(k)(t).
  [[nodiscard]] double derivative(double t, int k) const;
  /// Highest derivative order the coefficient actually has.
  [[nodiscard]] int max_derivative_order() const noexcept;

  /// Smoothness order m used by the hypotheses.
  [[nodiscard]] int m() const noexcept { return m_; }
  [[nodiscard]] double a0() const noexcept { return a0_; }
  [[nodiscard]] double a1() const noexcept { return a1_; }
  [[nodiscard]] double a_inf() const noexcept { return a_inf_; }

  [[nodiscard]] const PowerLog& theta() const noexcept { return theta_; }
  [[nodiscard]] const PowerLog& xi() const noexcept { return xi_; }
  [[nodiscard]] const std::optional<PowerLog>& lambda() const noexcept { return lambda_; }

  [[nodiscard]] SpeedProfile with_theta(const PowerLog& theta) const;
  [[nodiscard]] SpeedProfile with_xi(const PowerLog& xi) const;
  [[nodiscard]] SpeedProfile with_lambda(std::optional<PowerLog> lambda) const;
  [[nodiscard]] SpeedProfile with_m(int m) const;

  /// Times in (0, t_end) where the coefficient is only finitely smooth.
  [[nodiscard]] std::vector<double> breakpoints(double t_end) const;
  /// Length over which a varies by O(1) of its oscillation, near t.
  [[nodiscard]] double step_hint(double t) const;
  /// Extra sample times resolving localized structure (bump interiors).
  [[nodiscard]] std::vector<double> check_points(double t_end, int per_feature = 64) const;

  /// Bumps of an example2 profile (empty otherwise).
  [[nodiscard]] const std::vector<Bump>& bumps() const noexcept { return bumps_; }

 private:
  using Params = std::variant<ConstantParams, Example1Params, Example2Params>;
  explicit SpeedProfile(Params params);

  [[nodiscard]] const Bump* bump_at(double t) const;

  Params params_;
  int m_ = 1;
  double a0_ = 1.0;
  double a1_ = 1.0;
  double a_inf_ = 1.0;
  PowerLog theta_{};
  PowerLog xi_{};
  std::optional<PowerLog> lambda_{};
  std::vector<Bump> bumps_{};
};

/// t with Lambda(t) = s. Throws when Lambda is absent or s < Lambda(0).
double lambda_inverse(const SpeedProfile& profile, double s);

/// Theta(Lambda^{-1}(s)), with Lambda^{-1}(s) taken as 0 for s <= Lambda(0).
double theta_of_lambda_inverse(const SpeedProfile& profile, double s);

/// Build a profile from flat key/value parameters, e.g. family=example1, p=2,
/// q=0, r=0, m=2, chi=cos_offset, chi_offset=2, chi_amplitude=1. Optional
/// overrides: lambda=none|auto|powerlog with lambda_scale/lambda_power/
/// lambda_log_power, and likewise theta_* and xi_*.
SpeedProfile profile_from_params(const std::map<std::string, std::string>& params);

}  // namespace sdwave
