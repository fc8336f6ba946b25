#pragma once

// Numeric verification of the stabilization, oscillation and growth
// hypotheses on a finite time grid.

#include <optional>
#include <string>
#include <vector>

#include "sdwave/speed_profile.hpp"

namespace sdwave {

enum class Hypothesis { h1, h2, h3, h4, h5, h6, lambda_infinity };

std::string to_string(Hypothesis h);

struct HypothesisRecord {
  Hypothesis which = Hypothesis::h1;
  bool evaluated = false;
  bool holds = false;
  /// Supremum of the defining ratio when the tail rule accepts it, +inf otherwise.
  double fitted_constant = 0.0;
  /// Raw supremum over the grid, kept even when the hypothesis fails.
  double grid_supremum = 0.0;
  double worst_t = 0.0;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisRecord> records;
  /// C_k for k = 1..m (index 0 unused, set to 0).
  std::vector<double> derivative_constants;
  double horizon = 0.0;

  bool case_i = false;    // H1 with bounded Theta
  bool case_ii = false;   // H2 with m = 1 and 1/Xi integrable
  bool case_iii = false;  // H1-H4
  bool lambda_case = false;  // H1, H2, H5, H6 and Theta/Lambda increasing to infinity

  [[nodiscard]] const HypothesisRecord& get(Hypothesis h) const;
  [[nodiscard]] bool holds(Hypothesis h) const;
};

struct VerificationGrid {
  std::vector<double> times;

  /// 128 linear points on [0, 1] plus 512 geometric points on [1, horizon].
  static VerificationGrid standard(double horizon = 1e4);
  /// Each interval split into `factor` equal parts.
  [[nodiscard]] VerificationGrid refined(int factor) const;
};

struct HypothesisRequest {
  bool h1 = true;
  bool h2 = true;
  bool h3 = true;
  bool h4 = true;
  bool lambda_family = true;  // H5, H6 and the Theta/Lambda condition

  /// Everything that makes sense for the profile (H4/H6 need m >= 2, the
  /// Lambda family needs a Lambda).
  static HypothesisRequest applicable(const SpeedProfile& profile);
};

/// Relative slack of the tail rule: a ratio is accepted as bounded when its
/// supremum over the last decade of the grid does not exceed the supremum
/// before that decade by more than this factor.
inline constexpr double kTailSlack = 0.05;

HypothesisReport verify_hypotheses(const SpeedProfile& profile, const VerificationGrid& grid,
                                   double horizon, const HypothesisRequest& request);

HypothesisReport verify_hypotheses(const SpeedProfile& profile, const VerificationGrid& grid, double horizon);

/// Theta scaled so that the integral of |a - a_inf| stays below it on the
/// verification grid: max(1, 1.01 * C_H1) * Theta.
PowerLog calibrated_theta(const SpeedProfile& profile, const HypothesisReport& report);

/// Integral of |a - a_inf| over [0, t], accumulated through the sorted times.
std::vector<double> stabilization_integral(const SpeedProfile& profile, const std::vector<double>& times);

}  // namespace sdwave
