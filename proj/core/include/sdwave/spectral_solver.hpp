#pragma once

// Per-frequency integration of v'' + a(t)^2 |xi|^2 v = 0 and the energy
// densities and total energy built from it.

#include <span>
#include <vector>

#include "sdwave/lattice.hpp"
#include "sdwave/speed_profile.hpp"

namespace sdwave {

struct ModeState {
  double t = 0.0;
  Complex v{};
  Complex vt{};
  FrequencyPoint freq{};
};

struct ModeInit {
  Complex v0{};
  Complex v1{};
};

struct SolverOptions {
  /// Absolute and relative error allowed per accepted step.
  double tol = 1e-10;
  std::size_t max_steps = 20'000'000;
  /// Steps shorter than min_step * max(1, |t|) count as underflow.
  double min_step = 1e-13;
};

/// Trajectory through the accepted steps, starting at t = 0 and ending at t_end.
std::vector<ModeState> integrate_mode(const SpeedProfile& profile, const FrequencyPoint& freq, ModeInit init,
                                      double t_end, const SolverOptions& opts = {});

/// States at the requested times, which must be monotone and lie on one side
/// of start.t (integration runs backward when they precede it).
std::vector<ModeState> sample_mode(const SpeedProfile& profile, const ModeState& start,
                                   std::span<const double> times, const SolverOptions& opts = {});

std::vector<ModeState> sample_mode(const SpeedProfile& profile, const FrequencyPoint& freq, ModeInit init,
                                   std::span<const double> times, const SolverOptions& opts = {});

/// The exact solution for a constant speed c.
ModeState constant_speed_solution(double c, const FrequencyPoint& freq, ModeInit init, double t);

enum class EnergyMode { actual, stabilized };

/// |vt|^2 + a^2 |xi|^2 |v|^2 with a = a(t) (actual) or a_inf (stabilized).
double energy_density(const ModeState& state, const SpeedProfile& profile, EnergyMode mode = EnergyMode::actual);

/// Sample times 0, then `per_decade` geometric points per decade from t_first to t_end.
std::vector<double> sample_schedule(double t_end, int per_decade = 64, double t_first = 1e-2);

struct EnergyTrace {
  TorusGrid grid{1, 1};
  std::vector<double> times;
  /// density[i][p] for time i and grid point p.
  std::vector<std::vector<double>> density;
  std::vector<std::vector<double>> density_inf;
  std::vector<double> total;
};

/// Integrates every grid mode with initial data (DTFT of u0, DTFT of u1).
EnergyTrace simulate(const SpeedProfile& profile, const LatticeField& u0, const LatticeField& u1,
                     const TorusGrid& grid, std::span<const double> times, const SolverOptions& opts = {},
                     int threads = 1);

/// (2 pi)^{-d} times the trapezoidal integral of the density at each time.
/// Throws when the trace was produced on a different grid.
std::vector<double> total_energy(const EnergyTrace& trace, const TorusGrid& grid);

/// E(0) from the spectrum: the torus mean of |u1^|^2 + a(0)^2 |xi|^2 |u0^|^2.
double spectral_energy(const LatticeField& u0, const LatticeField& u1, double speed, const TorusGrid& grid);

}  // namespace sdwave
