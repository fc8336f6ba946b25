#include <doctest.h>

#include <sdwave/certificate.hpp>
#include <sdwave/diagonalization.hpp>
#include <sdwave/errors.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace sdwave;

TEST_CASE("frozen diagonalization step") {
  const DiagStep s = diag_step(ConjugateSystem{Complex(0.0, 1.0), Complex(0.1, 0.0), 1, 1});
  CHECK(s.lambda.real() == doctest::Approx(0.0).scale(1.0));
  CHECK(s.lambda.imag() == doctest::Approx(std::sqrt(0.99)).epsilon(1e-15));
  CHECK(s.delta.real() == doctest::Approx(0.0).scale(1.0));
  CHECK(s.delta.imag() == doctest::Approx(-0.1 / (1.0 + std::sqrt(0.99))).epsilon(1e-14));
  CHECK(std::abs(s.next.r.value()) == 0.0);
  CHECK(s.eigen_residual <= 1e-15);
  CHECK(s.radicand_ratio == doctest::Approx(0.01));

  // The oracle's eigenvectors agree with the step's M.
  const Matrix2 m = sdwave::test::eigenvector_matrix(ConjugateSystem{Complex(0.0, 1.0), Complex(0.1, 0.0), 1, 1}.matrix());
  CHECK(std::abs(m[1][0] - s.delta) <= 1e-15);
  CHECK(std::abs(m[0][1] - std::conj(s.delta)) <= 1e-15);
}

TEST_CASE("diagonalization step failures") {
  CHECK_THROWS_AS(diag_step(ConjugateSystem{Complex(0.0, 0.05), Complex(0.1, 0.0), 1, 1}), NumericalError);
  CHECK_THROWS_AS(diag_step(ConjugateSystem{Complex(0.0, -1.0), Complex(0.1, 0.0), 1, 1}), NumericalError);
  ConjugateJets zero_order{ComplexJet(0, Complex(0.0, 1.0)), ComplexJet(0, Complex(0.1)), 1};
  CHECK_THROWS_AS(diag_step(zero_order), std::out_of_range);
}

TEST_CASE("first-order system of a mode") {
  Example1Params e;
  e.p = 0.5;
  e.m = 2;
  const SpeedProfile prof = SpeedProfile::example1(e);
  ModeState st;
  st.t = 2.0;
  st.v = Complex(0.3, 0.1);
  st.vt = Complex(-0.2, 0.4);
  const double xi = 0.6;
  const FirstOrderSystem f = first_order_system(prof, xi, st);
  const double a = prof.a(2.0);
  const double da = prof.derivative(2.0, 1);
  CHECK(std::abs(f.v1[0] - (st.vt + Complex(0.0, a * xi) * st.v)) <= 1e-15);
  CHECK(std::abs(f.v1[1] - (st.vt - Complex(0.0, a * xi) * st.v)) <= 1e-15);
  CHECK(std::abs(f.a1.r - Complex(-da / (2 * a))) <= 1e-15);
  CHECK(std::abs(f.a1.phi - Complex(da / (2 * a), a * xi)) <= 1e-15);
  CHECK_THROWS(first_order_system(prof, 0.0, st));

  const ConjugateJets j = first_order_jets(prof, xi, 2.0, 3);
  CHECK(j.phi.order() == 2);
  CHECK(std::abs(j.phi.value() - f.a1.phi) <= 1e-15);
}

TEST_CASE("zone partition and boundary") {
  const PowerLog theta(1.0, 1.0, 0.0);
  const ZonePartition p = make_zone_partition(theta, 16.0, 1, ZoneFlavor::theta);
  CHECK(p.t0 == doctest::Approx(7.0));
  const double txi = zone_boundary(p, 0.5);
  CHECK(theta(txi) * 0.5 == doctest::Approx(16.0));
  CHECK(zone_boundary(p, 2.0) == p.t0);
  CHECK(std::isinf(zone_boundary(p, 0.0)));

  const ZonePartition bounded = make_zone_partition(PowerLog::constant(2.0), 16.0, 1, ZoneFlavor::theta);
  CHECK(bounded.t0 == 0.0);
  CHECK(std::isinf(zone_boundary(bounded, 1.0)));
  const ZonePartition d2 = make_zone_partition(theta, 16.0, 2, ZoneFlavor::theta);
  CHECK(theta(d2.t0) == doctest::Approx(16.0 / (2.0 * std::sqrt(2.0))));
}

TEST_CASE("chain norm constants") {
  const auto [lo1, hi1] = chain_norm_constants(1);
  CHECK(lo1 == 1.0);
  CHECK(hi1 == 1.0);
  const auto [lo3, hi3] = chain_norm_constants(3);
  CHECK(lo3 == doctest::Approx(std::pow((3.0 - 2.0 * std::sqrt(2.0)) / 2.0, 2)));
  CHECK(hi3 == doctest::Approx(std::pow((3.0 + 2.0 * std::sqrt(2.0)) / 2.0, 2)));
  // A single M with |delta|^2 = 1/2 reaches the bounds exactly.
  const Complex d(std::sqrt(0.5), 0.0);
  const auto [smin, smax] = sdwave::test::squared_singular_values({{{1.0, std::conj(d)}, {d, 1.0}}});
  CHECK(smin == doctest::Approx(chain_norm_constants(2).first).epsilon(1e-14));
  CHECK(smax == doctest::Approx(chain_norm_constants(2).second).epsilon(1e-14));
}

TEST_CASE("chain algebra reproduces the conjugated system (Example 2, m = 3)") {
  Example2Params b;
  b.m = 3;
  const SpeedProfile prof = SpeedProfile::example2(b);
  CertificateOptions o;
  o.kind = CertificateKind::zones_theta;
  o.m = 3;
  const CertificateSetup setup = prepare_certificate(prof, certificate_xi_samples(32), o);
  const auto stats = sdwave::test::check_chain_algebra(prof, setup.partition, 3, 100, 1e3, 41);
  CHECK(stats.max_error <= 1e-6);
  CHECK(stats.norm_violations == 0);
}

TEST_CASE("chain algebra reproduces the conjugated system (Example 1, m = 4)") {
  Example1Params e;
  e.q = 0.5;
  e.m = 4;
  const SpeedProfile prof = SpeedProfile::example1(e);
  const ZonePartition part = make_zone_partition(prof.theta(), 16.0, 1, ZoneFlavor::theta);
  const auto stats = sdwave::test::check_chain_algebra(prof, part, 4, 60, 1e3, 42);
  CHECK(stats.max_error <= 1e-6);
  CHECK(stats.norm_violations == 0);
}

TEST_CASE("chain diagnostics in the hyperbolic zone") {
  Example2Params b;
  const SpeedProfile prof = SpeedProfile::example2(b);
  const DiagChain c = build_chain(prof, 1.0, 200.0, 2);
  REQUIRE(c.levels.size() == 1u);
  CHECK(c.levels[0].eigen_residual <= 1e-12);
  CHECK(std::norm(c.levels[0].delta) <= 0.5);
  CHECK(c.log_delta_weight() == doctest::Approx(std::log(1.0 - std::norm(c.levels[0].delta))));
}

TEST_CASE("symbol-class fit on an exact power") {
  const PowerLog xi_fn(1.0, 1.0, 0.0);
  const SpeedProfile prof = SpeedProfile::constant({1.0, 2}).with_xi(xi_fn);
  // f = |xi|^q (1+t)^{-r}: |d^k f| |xi|^{-q} (1+t)^{r+k} = r (r+1) ... (r+k-1).
  const int q = 2;
  const int r = 1;
  auto f = [&](double t, double xi, int order) {
    const RealJet s = pow(RealJet::variable(t, order) + RealJet::constant(1.0, order), -static_cast<double>(r));
    return to_complex(s * std::pow(xi, q));
  };
  std::vector<SymbolSample> samples;
  for (int i = 0; i <= 200; ++i) samples.push_back({std::pow(10.0, 3.0 * i / 200.0), 0.5});
  const SymbolFit fit = verify_symbol_class(f, 2, q, r, prof, samples);
  CHECK(fit.holds);
  CHECK(fit.constant == doctest::Approx(2.0).epsilon(1e-12));

  auto g = [&](double t, double xi, int order) { return to_complex(RealJet::variable(t, order) * std::pow(xi, q)); };
  CHECK_FALSE(verify_symbol_class(g, 1, q, r, prof, samples).holds);
}

TEST_CASE("mu for a power-law Lambda") {
  Example1Params e;
  e.q = 0.5;
  e.m = 3;
  const SpeedProfile prof = SpeedProfile::example1(e);
  // Theta(Lambda^{-1}(1/r)) = r^{-2}, so mu(r) = 1/r.
  CHECK(mu(prof, 0.25) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK_THROWS(mu(prof, 0.0));
}
