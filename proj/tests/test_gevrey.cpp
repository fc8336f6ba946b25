#include <doctest.h>

#include <sdwave/gevrey.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace sdwave;

namespace {

// log sup_{j <= j_max} tau^j / M_j by direct scan over lgamma.
double brute_log_associated(double tau, double nu, double b, double sigma, int j_max) {
  double best = -INFINITY;
  for (int j = 0; j <= j_max; ++j) {
    const double log_m = nu * std::lgamma(j + 1.0) + b * std::pow(j, sigma);
    best = std::max(best, j * std::log(tau) - log_m);
  }
  return best;
}

// Theta(Lambda^{-1}(s)) for p = 0, q = 1/2: Lambda = sqrt(1+t), Theta = 1+t.
double composite_37(double s) { return std::max(1.0, s * s); }

SpeedProfile example37_profile() {
  Example1Params e;
  e.p = 0.0;
  e.q = 0.5;
  e.m = 3;
  return SpeedProfile::example1(e);
}

}  // namespace

TEST_CASE("associated function of j!") {
  const auto t = associated_function(LogConvexSequence::factorial_power(1.0), 4.0);
  CHECK(t.value == doctest::Approx(32.0 / 3.0).epsilon(1e-14));
  CHECK_FALSE(t.infinite);
  const auto table = LogConvexSequence::table({1.0, 1.0, 2.0, 6.0, 24.0});
  CHECK(associated_function(table, 4.0).value == doctest::Approx(32.0 / 3.0).epsilon(1e-14));
  CHECK(associated_function(LogConvexSequence::factorial_power(1.0), 0.5).value == 1.0);
}

TEST_CASE("associated function agrees with a direct scan") {
  for (double nu : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const auto seq = LogConvexSequence::factorial_power(nu);
    for (double tau : {1.0, 2.7, 10.0, 55.0, 300.0}) {
      const int j_max = static_cast<int>(4.0 * std::pow(tau, 1.0 / nu)) + 50;
      CHECK(associated_function(seq, tau).log_value ==
            doctest::Approx(brute_log_associated(tau, nu, 0.0, 1.0, j_max)).epsilon(1e-12));
    }
  }
  const auto ex = LogConvexSequence::exponential(1.0, 2.0);
  for (double tau : {1.0, 40.0, 1e4, 1e8}) {
    CHECK(associated_function(ex, tau).log_value ==
          doctest::Approx(brute_log_associated(tau, 1.0, 1.0, 2.0, 200)).epsilon(1e-12).scale(1.0));
  }
  // Dividing by j! lowers the factorial exponent by one.
  const auto div = associated_function(LogConvexSequence::factorial_power(3.0), 20.0, AssociatedMode::factorial_divided);
  CHECK(div.log_value == doctest::Approx(brute_log_associated(20.0, 2.0, 0.0, 1.0, 200)).epsilon(1e-12));
  // Every term is finite for nu = 0, but the supremum is not.
  CHECK(associated_function(LogConvexSequence::factorial_power(0.0), 2.0).infinite);
}

TEST_CASE("sequence validation") {
  CHECK_THROWS_AS(LogConvexSequence::table({1.0, 2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LogConvexSequence::table({1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LogConvexSequence::factorial_power(0.5).divided_by_factorial(), std::invalid_argument);
  CHECK_THROWS_AS(LogConvexSequence::exponential(1.0, 0.5), std::invalid_argument);
  const auto s = LogConvexSequence::factorial_power(2.5);
  CHECK(s.divided_by_factorial().factorial_exponent() == doctest::Approx(1.5));
  for (double j : {0.0, 3.0, 17.0}) {
    CHECK(s.log_ratio(j) == doctest::Approx(s.log_term(j + 1) - s.log_term(j)).epsilon(1e-12));
  }
}

TEST_CASE("L constant against a direct minimization") {
  const SpeedProfile prof = example37_profile();
  const auto seq = LogConvexSequence::factorial_power(1.5);
  for (double n : {1.0, 2.0, 4.0}) {
    double brute = INFINITY;
    for (int i = 0; i <= 20000; ++i) {
      const double tau = std::pow(10.0, 2.0 * i / 20000.0);
      const int j_max = static_cast<int>(4.0 * tau * tau) + 50;
      brute = std::min(brute, brute_log_associated(tau, 0.5, 0.0, 1.0, j_max) - composite_37(n * tau) / tau);
    }
    const LValue l = L_constant(n, seq, prof);
    CHECK(l.positive);
    CHECK(l.log_value <= brute + 1e-9);
    CHECK(l.log_value >= brute - 1e-4);
  }
}

TEST_CASE("L for j!^2 is positive exactly below N = 1") {
  const SpeedProfile prof = example37_profile();
  const auto seq = LogConvexSequence::factorial_power(2.0);
  for (double n : {0.5, 0.9}) CHECK(L_constant(n, seq, prof).positive);
  for (double n : {1.1, 2.0, 4.0}) CHECK_FALSE(L_constant(n, seq, prof).positive);
}

TEST_CASE("inner infimum of the gate") {
  const SpeedProfile prof = example37_profile();
  // tau >= 1/(2 sqrt d): the minimum sits at the left end while N tau >= 1.
  for (double n : {2.0, 8.0, 100.0}) CHECK(gate_inner_infimum(n, prof) == doctest::Approx(n / 4.0).epsilon(1e-8));
  CHECK(gate_inner_infimum(4.0, prof, 2) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("gate verdicts") {
  const SpeedProfile prof = example37_profile();
  std::vector<double> ns;
  for (double n = 2.0; n <= 1024.0; n *= 2.0) ns.push_back(n);
  const GateResult sub = theorem3_gate(ns, LogConvexSequence::factorial_power(1.5), prof);
  CHECK(sub.verdict == GateVerdict::case_i);
  const GateResult crit = theorem3_gate(ns, LogConvexSequence::factorial_power(2.0), prof);
  CHECK(crit.verdict == GateVerdict::case_ii);
  CHECK(crit.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(crit.to_csv().rows() == ns.size());
  CHECK(to_string(GateVerdict::case_ii) == "case-ii");
}

TEST_CASE("U functional against quadrature") {
  const SpeedProfile prof = example37_profile();
  const GevreyData data = build_gevrey_data(Example37Data{});
  const double n = 2.0;
  // Integrand exp(2 xi max(1, (N/xi)^2) - 8 rho / xi^2), symmetric in theta.
  auto f = [&](double th) {
    const double xi = 2.0 * std::sin(th / 2.0);
    if (xi == 0.0) return 0.0;
    return std::exp(2.0 * xi * composite_37(n / xi) - 8.0 / (xi * xi));
  };
  const int panels = 200000;
  const double h = std::numbers::pi / panels;
  double s = f(0.0) + f(std::numbers::pi);
  for (int i = 1; i < panels; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  const double oracle = 2.0 * s * h / 3.0;
  const UValue u = u_functional(n, data.log_spectrum, prof);
  CHECK(u.finite);
  CHECK(u.value == doctest::Approx(oracle).epsilon(1e-8));

  // Truncation leaves a spectrum of size ~1e-32 near theta = 0, which no
  // longer beats exp(2 N^2 / xi): U of the truncated field diverges.
  CHECK_FALSE(u_functional(n, LatticeField(1), data.field, prof).finite);
  CHECK_FALSE(u_functional(n, LatticeField(1), LatticeField::delta(1), prof).finite);
}

TEST_CASE("Example 3.6 data is an exact trigonometric polynomial") {
  const GevreyData data = build_gevrey_data(Example36Data{});
  // |sin(theta/2)|^8 = ((1 - cos theta)/2)^4: convolve (-1/4, 1/2, -1/4) four times.
  std::vector<double> c = {1.0};
  for (int i = 0; i < 4; ++i) {
    std::vector<double> next(c.size() + 2, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j] += -0.25 * c[j];
      next[j + 1] += 0.5 * c[j];
      next[j + 2] += -0.25 * c[j];
    }
    c = next;
  }
  for (int k = -6; k <= 6; ++k) {
    const double expected = std::abs(k) <= 4 ? c[static_cast<std::size_t>(k + 4)] : 0.0;
    CHECK(std::abs(data.field.at({k, 0, 0}) - expected) <= 1e-14);
  }
  CHECK(gevrey_data_csv(data).rows() == data.field.size());

  CHECK(moment_check(data.field, 7).pass);
  const MomentResult m8 = moment_check(data.field, 8);
  CHECK_FALSE(m8.pass);
  CHECK(m8.alpha[0] == 8);

  const auto seq = LogConvexSequence::exponential(1.0, 2.0);
  const DecayResult d = decay_check(data.field, seq, 1.0);
  CHECK(d.pass);
  double expected_log = -INFINITY;
  for (int k = 1; k <= 4; ++k) {
    const double v = std::abs(c[static_cast<std::size_t>(k + 4)]);
    expected_log = std::max(expected_log, std::log(v) + 2.0 * std::log(k) + brute_log_associated(k, 1.0, 1.0, 2.0, 60));
  }
  CHECK(d.log_constant == doctest::Approx(expected_log).epsilon(1e-12));

  const DecayBoundCheck fb = fourier_decay_bound(data.field, seq, 1.0, TorusGrid(1, 256));
  CHECK(fb.holds);
  CHECK(std::isfinite(fb.log_constant));
}

TEST_CASE("data construction errors") {
  CHECK_THROWS_AS(build_gevrey_data(Example36Data{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_gevrey_data(Example37Data{1.0, -1.0}), std::invalid_argument);
  const GevreyData d = build_gevrey_data(Example37Data{}, 64);
  CHECK(d.field.support_radius() <= 64);
  CHECK(d.log_spectrum(0.0) == -INFINITY);
}
