#include "sdwave/spectral_solver.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

#include "sdwave/errors.hpp"
#include "sdwave/parallel.hpp"

namespace sdwave {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 4>;  // Re v, Im v, Re vt, Im vt

State pack(Complex v, Complex vt) { return {v.real(), v.imag(), vt.real(), vt.imag()}; }

struct ModeRhs {
  const SpeedProfile* profile;
  double xi2;
  void operator()(const State& x, State& dx, double t) const {
    const double a = profile->a(t);
    const double k = a * a * xi2;
    dx[0] = x[2];
    dx[1] = x[3];
    dx[2] = -k * x[0];
    dx[3] = -k * x[1];
  }
};

// Adaptive integration from `start` through monotone targets; `emit` receives
// every accepted step when `every_step` is set, otherwise only the targets.
template <class Emit>
void drive(const SpeedProfile& profile, const ModeState& start, std::span<const double> targets,
           const SolverOptions& opts, bool every_step, Emit&& emit) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (targets.empty()) return;
  const double dir = targets.back() >= start.t ? 1.0 : -1.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double prev = i == 0 ? start.t : targets[i - 1];
    if ((targets[i] - prev) * dir < 0.0) throw std::invalid_argument("sample times must be monotone");
  }
  const double lo = std::min(start.t, targets.back());
  const double hi = std::max(start.t, targets.back());
  if (lo < 0.0) throw std::invalid_argument("integration times must be nonnegative");

  std::vector<double> breaks;
  for (double b : profile.breakpoints(hi)) {
    if (b > lo && b < hi) breaks.push_back(b);
  }
  if (dir < 0.0) std::reverse(breaks.begin(), breaks.end());
  std::size_t next_break = 0;

  auto stepper = odeint::make_controlled(opts.tol, opts.tol, odeint::runge_kutta_fehlberg78<State>());
  const ModeRhs rhs{&profile, start.freq.xi_norm() * start.freq.xi_norm()};
  State x = pack(start.v, start.vt);
  double t = start.t;
  double dt = dir * std::min(0.05, std::max(1e-6, hi - lo));
  std::size_t attempts = 0;

  auto state_at = [&](double time) {
    return ModeState{time, Complex(x[0], x[1]), Complex(x[2], x[3]), start.freq};
  };

  for (double target : targets) {
    while (t != target) {
      double stop = target;
      while (next_break < breaks.size() && (breaks[next_break] - t) * dir <= 0.0) ++next_break;
      if (next_break < breaks.size() && (breaks[next_break] - target) * dir < 0.0) stop = breaks[next_break];

      const double remaining = stop - t;
      const bool clamped = std::abs(dt) >= std::abs(remaining);
      double h = clamped ? remaining : dt;
      const double t_before = t;
      const auto res = stepper.try_step(rhs, x, t, h);
      if (++attempts > opts.max_steps) {
        throw NumericalError(fmt::format("tolerance not met within step budget at t = {:.17g}", t), t);
      }
      if (res == odeint::success) {
        if (clamped) t = stop;  // land exactly on the target or breakpoint
        // Keep the controller's proposal unless the step was only shortened to land.
        if (!clamped || std::abs(h) > std::abs(dt)) dt = h;
        if (every_step && t != target) emit(state_at(t));
      } else {
        dt = h;
        if (std::abs(dt) < opts.min_step * std::max(1.0, std::abs(t_before))) {
          throw NumericalError(fmt::format("step-size underflow at t = {:.17g}", t_before), t_before);
        }
      }
    }
    emit(state_at(t));
  }
}

}  // namespace

std::vector<ModeState> integrate_mode(const SpeedProfile& profile, const FrequencyPoint& freq, ModeInit init,
                                      double t_end, const SolverOptions& opts) {
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  ModeState start{0.0, init.v0, init.v1, freq};
  std::vector<ModeState> out{start};
  if (t_end == 0.0) return out;
  const double targets[] = {t_end};
  drive(profile, start, targets, opts, true, [&](const ModeState& s) { out.push_back(s); });
  return out;
}

std::vector<ModeState> sample_mode(const SpeedProfile& profile, const ModeState& start,
                                   std::span<const double> times, const SolverOptions& opts) {
  std::vector<ModeState> out;
  out.reserve(times.size());
  drive(profile, start, times, opts, false, [&](const ModeState& s) { out.push_back(s); });
  return out;
}

std::vector<ModeState> sample_mode(const SpeedProfile& profile, const FrequencyPoint& freq, ModeInit init,
                                   std::span<const double> times, const SolverOptions& opts) {
  return sample_mode(profile, ModeState{0.0, init.v0, init.v1, freq}, times, opts);
}

ModeState constant_speed_solution(double c, const FrequencyPoint& freq, ModeInit init, double t) {
  const double w = c * freq.xi_norm();
  ModeState s{t, {}, {}, freq};
  if (w == 0.0) {
    s.v = init.v0 + t * init.v1;
    s.vt = init.v1;
    return s;
  }
  s.v = std::cos(w * t) * init.v0 + std::sin(w * t) / w * init.v1;
  s.vt = -w * std::sin(w * t) * init.v0 + std::cos(w * t) * init.v1;
  return s;
}

double energy_density(const ModeState& state, const SpeedProfile& profile, EnergyMode mode) {
  const double a = mode == EnergyMode::actual ? profile.a(state.t) : profile.a_inf();
  const double xi = state.freq.xi_norm();
  return std::norm(state.vt) + a * a * xi * xi * std::norm(state.v);
}

std::vector<double> sample_schedule(double t_end, int per_decade, double t_first) {
  if (!(t_end > 0.0) || per_decade < 1 || !(t_first > 0.0)) {
    throw std::invalid_argument("sample schedule needs t_end > 0, per_decade >= 1, t_first > 0");
  }
  std::vector<double> out{0.0};
  for (int k = 0;; ++k) {
    const double t = t_first * std::pow(10.0, static_cast<double>(k) / per_decade);
    if (t >= t_end * (1.0 - 1e-12)) break;
    out.push_back(t);
  }
  out.push_back(t_end);
  return out;
}

EnergyTrace simulate(const SpeedProfile& profile, const LatticeField& u0, const LatticeField& u1,
                     const TorusGrid& grid, std::span<const double> times, const SolverOptions& opts,
                     int threads) {
  if (u0.dim() != grid.dim() || u1.dim() != grid.dim()) {
    throw std::invalid_argument("initial data dimension does not match the torus grid");
  }
  EnergyTrace tr;
  tr.grid = grid;
  tr.times.assign(times.begin(), times.end());
  const std::size_t nt = times.size();
  const std::size_t np = grid.size();
  tr.density.assign(nt, std::vector<double>(np, 0.0));
  tr.density_inf.assign(nt, std::vector<double>(np, 0.0));

  parallel_for(np, threads, [&](std::size_t p) {
    const FrequencyPoint f = grid.point(p);
    const ModeInit init{dtft(u0, f.theta()), dtft(u1, f.theta())};
    const ModeState start{0.0, init.v0, init.v1, f};
    std::vector<ModeState> states;
    std::size_t first = 0;
    if (nt > 0 && times[0] == 0.0) {
      states.push_back(start);
      first = 1;
    }
    auto rest = sample_mode(profile, start, times.subspan(first), opts);
    states.insert(states.end(), rest.begin(), rest.end());
    for (std::size_t i = 0; i < nt; ++i) {
      tr.density[i][p] = energy_density(states[i], profile, EnergyMode::actual);
      tr.density_inf[i][p] = energy_density(states[i], profile, EnergyMode::stabilized);
    }
  });
  tr.total = total_energy(tr, grid);
  return tr;
}

std::vector<double> total_energy(const EnergyTrace& trace, const TorusGrid& grid) {
  if (!(trace.grid == grid)) throw std::invalid_argument("energy trace was computed on a different grid");
  std::vector<double> out;
  out.reserve(trace.density.size());
  for (const auto& row : trace.density) out.push_back(grid.mean(row));
  return out;
}

double spectral_energy(const LatticeField& u0, const LatticeField& u1, double speed, const TorusGrid& grid) {
  return grid.mean([&](const FrequencyPoint& f) {
    const double xi = f.xi_norm();
    return std::norm(dtft(u1, f.theta())) + speed * speed * xi * xi * std::norm(dtft(u0, f.theta()));
  });
}

}  // namespace sdwave
