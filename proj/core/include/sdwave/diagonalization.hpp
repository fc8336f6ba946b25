#pragma once

// Zones in the (t, |xi|) plane, the first-order reformulation of a mode and
// the refined diagonalization chain A_1 -> A_2 -> ... -> A_m.

#include <array>
#include <functional>
#include <vector>

#include "sdwave/jet.hpp"
#include "sdwave/lattice.hpp"
#include "sdwave/spectral_solver.hpp"
#include "sdwave/speed_profile.hpp"

namespace sdwave {

using Vector2 = std::array<Complex, 2>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

Matrix2 operator*(const Matrix2& a, const Matrix2& b);
Vector2 operator*(const Matrix2& a, const Vector2& v);
Matrix2 inverse(const Matrix2& a);
double max_abs_entry(const Matrix2& a);
double norm_squared(const Vector2& v);

/// [[phi, conj r], [r, conj phi]] at one point; deriv_budget counts the
/// t-derivatives still available for the next diagonalization step.
struct ConjugateSystem {
  Complex phi{};
  Complex r{};
  int level = 1;
  int deriv_budget = 0;

  [[nodiscard]] Matrix2 matrix() const;
};

/// The same system carried as Taylor jets in t, of order deriv_budget.
struct ConjugateJets {
  ComplexJet phi;
  ComplexJet r;
  int level = 1;

  [[nodiscard]] ConjugateSystem at_point() const { return {phi.value(), r.value(), level, phi.order()}; }
};

struct FirstOrderSystem {
  Vector2 v1{};
  ConjugateSystem a1{};
};

/// V1 = (vt + i a |xi| v, vt - i a |xi| v) with r1 = -a'/(2a) and
/// phi1 = a'/(2a) + i a |xi|. Throws for |xi| = 0.
FirstOrderSystem first_order_system(const SpeedProfile& profile, double xi_norm, const ModeState& state);

/// A_1 as jets of order m - 1 about t.
ConjugateJets first_order_jets(const SpeedProfile& profile, double xi_norm, double t, int m);

struct DiagStep {
  Complex lambda{};
  Complex delta{};
  Matrix2 m{};
  ConjugateJets next;
  /// (|r_k| / phi_kIm)^2, the eigenvalue radicand deficit.
  double radicand_ratio = 0.0;
  /// Im(conj(delta_k) r_{k+1}) / phi_kIm.
  double correction_ratio = 0.0;
  /// max entry of A_k M_k - M_k diag(lambda, conj lambda).
  double eigen_residual = 0.0;
};

/// One refined diagonalization step. Throws NumericalError when the radicand
/// is not positive and std::out_of_range when no derivative is left.
DiagStep diag_step(const ConjugateJets& a);

/// Frozen-coefficient convenience: the system is treated as constant in t.
DiagStep diag_step(const ConjugateSystem& a);

struct DiagLevel {
  ConjugateSystem a;
  Complex lambda{};
  Complex delta{};
  Matrix2 m{};
  double radicand_ratio = 0.0;
  double correction_ratio = 0.0;
  double eigen_residual = 0.0;
};

struct DiagChain {
  double t = 0.0;
  double xi_norm = 0.0;
  std::vector<DiagLevel> levels;  // k = 1..m-1
  ConjugateSystem final_system;   // A_m

  /// M_1 M_2 ... M_{m-1}.
  [[nodiscard]] Matrix2 product() const;
  /// Sum over levels of log((1 - |delta_k|^2)).
  [[nodiscard]] double log_delta_weight() const;
};

DiagChain build_chain(const SpeedProfile& profile, double xi_norm, double t, int m);

/// Jets of every chain level (A_1 .. A_m), for symbol-class fits.
std::vector<ConjugateJets> chain_jets(const SpeedProfile& profile, double xi_norm, double t, int m);

/// ((3 - 2 sqrt 2)/2)^{m-1} and ((3 + 2 sqrt 2)/2)^{m-1}.
std::pair<double, double> chain_norm_constants(int m);

enum class ZoneFlavor { theta, lambda };

struct ZonePartition {
  double n = 16.0;
  double t0 = 0.0;
  ZoneFlavor flavor = ZoneFlavor::theta;
  PowerLog control{};
  int dim = 1;
};

/// T0 = max{t >= 0 : control(t) = N / (2 sqrt d)}, or 0 when no such t exists.
ZonePartition make_zone_partition(const PowerLog& control, double n, int dim, ZoneFlavor flavor);

/// t_xi solving control(t) |xi| = N on [T0, inf); +inf when never reached,
/// T0 when already exceeded there.
double zone_boundary(const ZonePartition& partition, double xi_norm);

/// f(t, |xi|) as a jet of the requested order in t.
using SymbolFunction = std::function<ComplexJet(double t, double xi_norm, int order)>;

struct SymbolSample {
  double t = 0.0;
  double xi_norm = 0.0;
};

struct SymbolFit {
  bool holds = false;
  double constant = 0.0;
  double worst_t = 0.0;
  double worst_xi = 0.0;
  int worst_k = 0;
};

/// sup of |d_t^k f| |xi|^{-q} Xi(t)^{r+k} over the samples and k <= p, with the
/// last-decade tail rule in t.
SymbolFit verify_symbol_class(const SymbolFunction& f, int p, int q, int r, const SpeedProfile& profile,
                              const std::vector<SymbolSample>& samples);

enum class ChainEntry { r, delta, phi_im };

/// Entry of level k (1-based) of the chain as a SymbolFunction.
SymbolFunction chain_entry(const SpeedProfile& profile, int m, int level, ChainEntry entry);

/// mu(r) = r Theta(Lambda^{-1}(1/r)); requires 1/r >= Lambda(0).
double mu(const SpeedProfile& profile, double r);

}  // namespace sdwave
