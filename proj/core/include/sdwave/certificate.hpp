#pragma once

// Two-sided envelopes lower(t) <= E(t, xi) / E(0, xi) <= upper(t) built from
// the zone estimates and the diagonalization chain, and their comparison with
// directly integrated modes. All envelopes are kept as logarithms.

#include <vector>

#include "sdwave/csv.hpp"
#include "sdwave/diagonalization.hpp"
#include "sdwave/hypotheses.hpp"
#include "sdwave/spectral_solver.hpp"
#include "sdwave/speed_profile.hpp"

namespace sdwave {

enum class CertificateKind {
  bounded_theta,  // case (i): Theta bounded, pseudo-differential estimate everywhere
  integrable_xi,  // case (ii): m = 1, 1/Xi integrable, Gronwall on E directly
  zones_theta,    // case (iii): Theta zones and the diagonalization chain
  zones_lambda,   // Lambda zones, bound of the form C exp(2|xi| Theta(Lambda^{-1}(N0/|xi|)))
};

std::string to_string(CertificateKind kind);

struct CertificateOptions {
  CertificateKind kind = CertificateKind::zones_theta;
  double horizon = 1e3;
  int dim = 1;
  /// Chain length; 0 means the profile's m.
  int m = 0;
  double n_start = 16.0;
  double n_cap = 65536.0;
  /// Horizon of the hypothesis verification grid.
  double hypothesis_horizon = 1e4;
  int per_decade = 64;
  SolverOptions solver{};
  /// Absolute slack on log ratios for solver error.
  double log_slack = 1e-8;
  int threads = 1;
};

/// Everything shared by the per-mode envelopes.
struct CertificateSetup {
  CertificateKind kind = CertificateKind::zones_theta;
  int m = 1;
  int dim = 1;
  double horizon = 0.0;
  HypothesisReport hypotheses;
  PowerLog theta_c{};
  double c1 = 0.0;
  ZonePartition partition{};
  /// Fitted constant of |r_m| |xi|^{m-1} Xi^m over the hyperbolic samples.
  double c_rm = 0.0;
  bool c_rm_holds = false;
  double max_radicand_ratio = 0.0;
  double max_delta2 = 0.0;
  double max_correction_ratio = 0.0;
  double max_eigen_residual = 0.0;
  int escalations = 0;
};

struct ModeEnvelope {
  double xi_norm = 0.0;
  double t_xi = 0.0;
  std::vector<double> times;
  std::vector<double> log_lower;
  std::vector<double> log_upper;
  /// inf / sup of the envelopes, with the analytic tail of int |r_m| past the horizon.
  double log_lower_const = 0.0;
  double log_upper_const = 0.0;
};

struct ModeCertificate {
  ModeEnvelope envelope;
  std::vector<double> log_measured;
  double log_measured_min = 0.0;
  double log_measured_max = 0.0;
  /// Largest violation (<= 0 when inside, by at least the slack).
  double worst_margin = 0.0;
  bool pass = false;
};

struct LambdaBound {
  double n0 = 0.0;
  /// max over modes of log(upper) - 2|xi| Theta(Lambda^{-1}(N0/|xi|)), i.e. log C.
  double log_c_theory = 0.0;
  /// Same quantity with the measured ratio in place of the envelope.
  double log_c_fit = 0.0;
};

struct CertificateReport {
  CertificateSetup setup;
  std::vector<ModeCertificate> modes;
  LambdaBound lambda{};
  bool pass = false;

  [[nodiscard]] CsvTable to_csv() const;
};

/// Verifies the hypotheses needed by opts.kind (throws HypothesisFailure),
/// fits constants and, for zone kinds, escalates N until the smallness
/// conditions hold at every hyperbolic sample of every xi (throws
/// NumericalError naming the failing condition past the cap).
CertificateSetup prepare_certificate(const SpeedProfile& profile, const std::vector<double>& xi_norms,
                                     const CertificateOptions& opts);

/// Envelope for one mode at the given sorted times in [0, horizon].
ModeEnvelope bound_certificate(const SpeedProfile& profile, const CertificateSetup& setup, double xi_norm,
                               const std::vector<double>& times);

/// Initial data used for the measured side: v(0) = 1, v'(0) = i a(0) |xi| / 2.
ModeInit certificate_init(const SpeedProfile& profile, double xi_norm);

/// prepare + envelopes + direct integration for every xi.
CertificateReport certify(const SpeedProfile& profile, const std::vector<double>& xi_norms,
                          const CertificateOptions& opts);

/// |xi| = 2 sin(theta/2) for theta_j = pi (j + 1) / count, j < count.
std::vector<double> certificate_xi_samples(int count);

/// Smallest N0 (to 1e-9 relative) with k Theta(Lambda^{-1}(n / x)) <= 2 Theta(Lambda^{-1}(N0 / x))
/// for every x in xs; Lambda^{-1} is clamped to 0 below Lambda(0).
double lambda_threshold(const SpeedProfile& profile, double k, double n, const std::vector<double>& xs);

}  // namespace sdwave
