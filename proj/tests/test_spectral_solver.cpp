#include <doctest.h>

#include <sdwave/errors.hpp>
#include <sdwave/spectral_solver.hpp>

#include "test_support.hpp"

#include <cmath>

using namespace sdwave;

namespace {

// Classical fixed-step RK4 on v'' = -(a |xi|)^2 v.
std::pair<Complex, Complex> rk4(const SpeedProfile& prof, double xi, Complex v, Complex vt, double t_end, int steps) {
  const double h = t_end / steps;
  auto acc = [&](double t, Complex x) { return -std::pow(prof.a(t) * xi, 2) * x; };
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    const Complex k1v = vt, k1a = acc(t, v);
    const Complex k2v = vt + 0.5 * h * k1a, k2a = acc(t + 0.5 * h, v + 0.5 * h * k1v);
    const Complex k3v = vt + 0.5 * h * k2a, k3a = acc(t + 0.5 * h, v + 0.5 * h * k2v);
    const Complex k4v = vt + h * k3a, k4a = acc(t + h, v + h * k3v);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    vt += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    t += h;
  }
  return {v, vt};
}

}  // namespace

TEST_CASE("constant speed matches the exact solution") {
  const SpeedProfile prof = SpeedProfile::constant({1.5, 2});
  const FrequencyPoint f = FrequencyPoint::from_xi_norm(0.8);
  const ModeInit init{Complex(0.3, -0.2), Complex(1.0, 0.5)};
  const auto times = sample_schedule(100.0, 16);
  SolverOptions o;
  o.tol = 1e-12;
  const auto states = sample_mode(prof, f, init, times, o);
  REQUIRE(states.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ModeState exact = constant_speed_solution(1.5, f, init, times[i]);
    CHECK(std::abs(states[i].v - exact.v) <= 1e-9);
    CHECK(std::abs(states[i].vt - exact.vt) <= 1e-9);
  }
}

TEST_CASE("exact constant-speed solution, including xi = 0") {
  const FrequencyPoint zero = FrequencyPoint::from_xi_norm(0.0);
  const ModeState s = constant_speed_solution(2.0, zero, {Complex(1.0), Complex(0.5)}, 4.0);
  CHECK(s.v == Complex(3.0));
  CHECK(s.vt == Complex(0.5));
  const FrequencyPoint f = FrequencyPoint::from_xi_norm(0.5);
  const ModeState c = constant_speed_solution(2.0, f, {Complex(1.0), Complex(0.0)}, 1.0);
  CHECK(c.v.real() == doctest::Approx(std::cos(1.0)).epsilon(1e-14));
}

TEST_CASE("solver agrees with a fixed-step RK4 reference") {
  Example1Params e;
  e.p = 0.5;
  e.q = 0.5;
  e.m = 1;
  const SpeedProfile prof = SpeedProfile::example1(e);
  for (double xi : {0.1, 0.9, 1.9}) {
    const FrequencyPoint f = FrequencyPoint::from_xi_norm(xi);
    const ModeInit init{Complex(1.0), Complex(0.0, 0.4)};
    const double times[] = {0.0, 20.0};
    SolverOptions o;
    o.tol = 1e-12;
    const auto s = sample_mode(prof, f, init, times, o);
    const auto [v, vt] = rk4(prof, f.xi_norm(), init.v0, init.v1, 20.0, 40000);
    CHECK(std::abs(s.back().v - v) <= 1e-8);
    CHECK(std::abs(s.back().vt - vt) <= 1e-8);
  }
}

TEST_CASE("Wronskian of two real solutions stays constant") {
  Example2Params b;
  const SpeedProfile prof = SpeedProfile::example2(b);
  const FrequencyPoint f = FrequencyPoint::from_xi_norm(0.7);
  const auto times = sample_schedule(300.0, 16);
  SolverOptions o;
  o.tol = 1e-12;
  const auto s1 = sample_mode(prof, f, {Complex(1.0), Complex(0.0)}, times, o);
  const auto s2 = sample_mode(prof, f, {Complex(0.0), Complex(1.0)}, times, o);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex w = s1[i].v * s2[i].vt - s2[i].v * s1[i].vt;
    CHECK(std::abs(w - 1.0) <= 1e-8);
  }
}

TEST_CASE("backward integration returns to the initial data") {
  Example1Params e;
  e.q = 0.5;
  e.m = 2;
  const SpeedProfile prof = SpeedProfile::example1(e);
  const FrequencyPoint f = FrequencyPoint::from_xi_norm(1.2);
  const ModeInit init{Complex(0.5, 0.5), Complex(-1.0)};
  SolverOptions o;
  o.tol = 1e-12;
  const double fwd[] = {0.0, 50.0};
  const auto end = sample_mode(prof, f, init, fwd, o).back();
  const double back[] = {25.0, 0.0};
  const auto s = sample_mode(prof, end, back, o);
  CHECK(std::abs(s.back().v - init.v0) <= 1e-8);
  CHECK(std::abs(s.back().vt - init.v1) <= 1e-8);
}

TEST_CASE("sample schedule shape") {
  const auto t = sample_schedule(1000.0, 8);
  REQUIRE(t.size() > 2u);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 1000.0);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  CHECK(t[1] == doctest::Approx(1e-2));
}

TEST_CASE("energy densities") {
  Example1Params e;
  e.p = 1.0;
  e.m = 1;
  const SpeedProfile prof = SpeedProfile::example1(e);
  ModeState s;
  s.t = 3.0;
  s.v = Complex(0.0, 2.0);
  s.vt = Complex(1.0, 1.0);
  s.freq = FrequencyPoint::from_xi_norm(0.5);
  const double xi = s.freq.xi_norm();
  CHECK(energy_density(s, prof) == doctest::Approx(2.0 + std::pow(prof.a(3.0) * xi, 2) * 4.0));
  CHECK(energy_density(s, prof, EnergyMode::stabilized) == doctest::Approx(2.0 + xi * xi * 4.0));
}

TEST_CASE("simulated total energy starts at the spectral energy and is conserved for constant speed") {
  std::mt19937_64 rng(31);
  const LatticeField u0 = sdwave::test::random_field(rng, 1, -3, 6);
  const LatticeField u1 = sdwave::test::random_field(rng, 1, -3, 6);
  const TorusGrid grid(1, 32);
  const SpeedProfile prof = SpeedProfile::constant({1.25, 1});
  const auto times = sample_schedule(50.0, 8);
  SolverOptions o;
  o.tol = 1e-12;
  const EnergyTrace trace = simulate(prof, u0, u1, grid, times, o, 2);
  CHECK(trace.total.front() == doctest::Approx(spectral_energy(u0, u1, 1.25, grid)).epsilon(1e-12));
  CHECK(trace.total.front() == doctest::Approx(lattice_energy(u0, u1, 1.25)).epsilon(1e-12));
  for (double e : trace.total) CHECK(std::abs(e / trace.total.front() - 1.0) <= 1e-8);
  const auto recomputed = total_energy(trace, grid);
  CHECK(recomputed.back() == doctest::Approx(trace.total.back()).epsilon(1e-14));
  CHECK_THROWS(total_energy(trace, TorusGrid(1, 16)));

  // Thread count does not change the numbers.
  const EnergyTrace serial = simulate(prof, u0, u1, grid, times, o, 1);
  CHECK(serial.total == trace.total);
}

TEST_CASE("step budget exhaustion surfaces as a numerical error") {
  const SpeedProfile prof = SpeedProfile::constant({1.0, 1});
  SolverOptions o;
  o.max_steps = 10;
  const double times[] = {0.0, 1e4};
  CHECK_THROWS_AS(sample_mode(prof, FrequencyPoint::from_xi_norm(2.0), {Complex(1.0), Complex(0.0)}, times, o),
                  NumericalError);
}
