#pragma once

// Log-convex sequences and their associated functions, the L- and
// U-functionals, moment/decay conditions on lattice data and the Gevrey-type
// data constructors.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "sdwave/csv.hpp"
#include "sdwave/lattice.hpp"
#include "sdwave/speed_profile.hpp"

namespace sdwave {

enum class SequenceKind { factorial_power, exponential, table };

/// log M_j = a log j! + b j^sigma for the closed-form kinds, or a stored table.
class LogConvexSequence {
 public:
  /// M_j = j!^nu, nu >= 0.
  static LogConvexSequence factorial_power(double nu);
  /// M_j = j! exp(b j^sigma), b >= 0, sigma >= 1.
  static LogConvexSequence exponential(double b, double sigma);
  /// Positive values M_0..M_{n-1}; throws unless log-convex (to 1e-12 relative).
  static LogConvexSequence table(std::vector<double> values);

  [[nodiscard]] SequenceKind kind() const noexcept { return kind_; }
  [[nodiscard]] double factorial_exponent() const noexcept { return a_; }
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }

  /// Number of stored terms; unbounded for closed forms.
  [[nodiscard]] std::optional<std::size_t> size() const;
  [[nodiscard]] double log_term(double j) const;
  /// log M_{j+1} - log M_j.
  [[nodiscard]] double log_ratio(double j) const;

  /// {M_j / j!}; throws when the result is no longer log-convex.
  [[nodiscard]] LogConvexSequence divided_by_factorial() const;

 private:
  SequenceKind kind_ = SequenceKind::factorial_power;
  double a_ = 1.0;
  double b_ = 0.0;
  double sigma_ = 1.0;
  std::vector<double> log_table_;
};

enum class AssociatedMode { raw, factorial_divided };

struct AssociatedValue {
  double log_value = 0.0;
  double value = 0.0;  // exp(log_value), may overflow to inf
  bool infinite = false;
  double argmax = 0.0;
};

/// T[{M_j}](tau) = sup_{j >= 0} tau^j / M_j.
AssociatedValue associated_function(const LogConvexSequence& seq, double tau,
                                    AssociatedMode mode = AssociatedMode::raw);

struct LValue {
  double log_value = 0.0;
  double value = 0.0;
  bool positive = false;
  bool converged = false;
  double argmin_tau = 0.0;
};

/// inf_{tau >= 1} T[{M_j/j!}](tau) / exp(Theta(Lambda^{-1}(N tau)) / tau).
LValue L_constant(double n, const LogConvexSequence& seq, const SpeedProfile& profile);

struct UValue {
  double log_value = 0.0;
  double value = 0.0;  // exp(log_value), may overflow to inf while finite is true
  bool finite = false;
  int shells = 0;
};

/// log E(0, theta) on the circle; -inf where the spectrum vanishes.
using LogSpectrum = std::function<double(double theta)>;

/// Integral over the circle of exp(2|xi| Theta(Lambda^{-1}(N/|xi|))) E(0, theta),
/// evaluated on dyadic shells toward theta = 0 (d = 1).
UValue u_functional(double n, const LogSpectrum& log_spectrum, const SpeedProfile& profile);
UValue u_functional(double n, const LatticeField& u0, const LatticeField& u1, const SpeedProfile& profile);

struct MomentResult {
  bool pass = true;
  std::array<int, kMaxDim> alpha{};
  double moment = 0.0;
  double scale = 0.0;
};

/// sum_k k^alpha v[k] for every multi-index |alpha| <= max_order; first failure
/// beyond 1e-9 sum_k |k^alpha| |v[k]|.
MomentResult moment_check(const LatticeField& v, int max_order);

struct DecayResult {
  bool pass = false;
  double log_constant = 0.0;
  double constant = 0.0;
  std::string note;
};

/// sup_k |v[k]| |k|^{d+1} T[{M_j}](|k| / rho) over the stored k != 0.
DecayResult decay_check(const LatticeField& v, const LogConvexSequence& seq, double rho);

struct GevreyData {
  LatticeField field{1};
  LogSpectrum log_spectrum;
  double m0 = 0.0;
  double rho = 0.0;
  double kappa = 0.0;
  int truncation = 0;
};

struct Example36Data {
  double m0 = 8.0;
};
struct Example37Data {
  double rho = 1.0;
  double kappa = 2.0;
};

/// u1[k] = (1/2 pi) int g(theta) e^{i k theta} for |k| <= K by the periodic
/// trapezoidal rule, entries below 1e-16 dropped. Throws NumericalError when
/// doubling the rule changes an entry by more than 1e-13.
GevreyData build_gevrey_data(const Example36Data& kind, int truncation = 128);
GevreyData build_gevrey_data(const Example37Data& kind, int truncation = 128);

struct DecayBoundCheck {
  bool holds = false;
  double log_constant = 0.0;
  double worst_theta = 0.0;
};

/// Fits log C = max over the nonzero grid nodes of log|v^(theta)| +
/// log T[{M_j/j!}](1/(d rho |theta|)); holds when the innermost quarter of the
/// nodes (smallest |theta|) stays within 5% of the rest.
DecayBoundCheck fourier_decay_bound(const LatticeField& v, const LogConvexSequence& seq, double rho,
                                    const TorusGrid& grid);

enum class GateVerdict { case_i, case_ii, neither };

std::string to_string(GateVerdict v);

struct GateResult {
  GateVerdict verdict = GateVerdict::neither;
  std::vector<double> n_grid;
  std::vector<LValue> l_values;
  /// inf_{tau >= 1/(2 sqrt d)} Theta(Lambda^{-1}(N tau)) / (N Theta(Lambda^{-1}(tau))).
  std::vector<double> inner;
  double slope = 0.0;
  double n0 = 0.0;

  [[nodiscard]] CsvTable to_csv() const;
};

GateResult theorem3_gate(const std::vector<double>& n_grid, const LogConvexSequence& seq,
                         const SpeedProfile& profile, double threshold = 10.0, int dim = 1);

/// The inner infimum above for a single N.
double gate_inner_infimum(double n, const SpeedProfile& profile, int dim = 1);

CsvTable gevrey_data_csv(const GevreyData& data);

}  // namespace sdwave
