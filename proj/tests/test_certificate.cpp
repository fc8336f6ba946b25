#include <doctest.h>

#include <sdwave/certificate.hpp>
#include <sdwave/errors.hpp>

#include <cmath>
#include <numbers>

using namespace sdwave;

namespace {

SpeedProfile example1(double p, double q, double r, int m) {
  Example1Params e;
  e.p = p;
  e.q = q;
  e.r = r;
  e.m = m;
  return SpeedProfile::example1(e);
}

// log E(t)/E(0) for a mode, integrated independently of the certificate.
double measured_log_ratio(const SpeedProfile& prof, double xi, double t) {
  const ModeInit init = certificate_init(prof, xi);
  const double times[] = {0.0, t};
  SolverOptions o;
  o.tol = 1e-11;
  const auto s = sample_mode(prof, FrequencyPoint::from_xi_norm(xi), init, times, o);
  return std::log(energy_density(s[1], prof) / energy_density(s[0], prof));
}

}  // namespace

TEST_CASE("xi samples") {
  const auto xs = certificate_xi_samples(4);
  REQUIRE(xs.size() == 4u);
  CHECK(xs[0] == doctest::Approx(2.0 * std::sin(std::numbers::pi / 8)));
  CHECK(xs[3] == doctest::Approx(2.0));
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] > xs[i - 1]);
}

TEST_CASE("certificate init") {
  const SpeedProfile prof = example1(2.0, 0.0, 0.0, 1);
  const ModeInit init = certificate_init(prof, 0.5);
  CHECK(init.v0 == Complex(1.0));
  CHECK(init.v1 == Complex(0.0, prof.a(0.0) * 0.25));
}

TEST_CASE("bounded Theta certificate") {
  const SpeedProfile prof = example1(2.0, 0.0, 0.0, 1);
  CertificateOptions o;
  o.kind = CertificateKind::bounded_theta;
  o.horizon = 200.0;
  o.per_decade = 16;
  const auto xs = certificate_xi_samples(6);
  const CertificateReport rep = certify(prof, xs, o);
  CHECK(rep.pass);
  REQUIRE(rep.modes.size() == xs.size());
  const CertificateSetup& st = rep.setup;
  // Constant assembled by hand from the fitted quantities.
  const double sup_theta = st.theta_c(o.horizon);
  const double a_inf2 = prof.a_inf() * prof.a_inf();
  const double expected = std::log(std::max(1.0, prof.a1() * prof.a1() / a_inf2)) +
                          4.0 * prof.a1() / prof.a0() * sup_theta +
                          std::log(std::max(1.0, a_inf2 / (prof.a(0.0) * prof.a(0.0))));
  for (const auto& m : rep.modes) {
    CHECK(m.envelope.log_upper_const == doctest::Approx(expected).epsilon(1e-9));
    CHECK(m.envelope.log_upper.front() == m.envelope.log_upper_const);
    CHECK(m.envelope.log_lower.back() == m.envelope.log_lower_const);
    for (std::size_t i = 0; i < m.envelope.times.size(); ++i) {
      CHECK(m.envelope.log_lower[i] <= m.log_measured[i] + 1e-8);
      CHECK(m.log_measured[i] <= m.envelope.log_upper[i] + 1e-8);
    }
  }
  // Measured values reproduced by a separate integration.
  const auto& last = rep.modes.back();
  CHECK(last.log_measured.back() == doctest::Approx(measured_log_ratio(prof, xs.back(), 200.0)).epsilon(1e-6));
}

TEST_CASE("integrable 1/Xi certificate uses C1 from the hypotheses") {
  const SpeedProfile prof = example1(0.5, 0.25, 0.0, 1);
  CertificateOptions o;
  o.kind = CertificateKind::integrable_xi;
  o.horizon = 300.0;
  o.per_decade = 16;
  const CertificateReport rep = certify(prof, certificate_xi_samples(4), o);
  CHECK(rep.pass);
  REQUIRE(rep.setup.hypotheses.derivative_constants.size() >= 2u);
  CHECK(rep.setup.c1 == rep.setup.hypotheses.derivative_constants[1]);
  const double expected = 2.0 * rep.setup.c1 / prof.a0() * prof.xi().integral_inverse(INFINITY);
  CHECK(rep.modes[0].envelope.log_upper_const >= expected);
}

TEST_CASE("wrong certificate kind is refused") {
  CertificateOptions o;
  o.kind = CertificateKind::bounded_theta;
  CHECK_THROWS_AS(prepare_certificate(example1(0.0, 0.5, 0.0, 3), {1.0}, o), HypothesisFailure);
  o.kind = CertificateKind::integrable_xi;
  CHECK_THROWS_AS(prepare_certificate(example1(0.0, 0.5, 0.0, 1), {1.0}, o), HypothesisFailure);
  CHECK_THROWS_AS(certify(example1(2.0, 0.0, 0.0, 1), {2.5}, o), std::invalid_argument);
  CHECK_THROWS_AS(certify(example1(2.0, 0.0, 0.0, 1), {}, o), std::invalid_argument);
}

TEST_CASE("zone certificate for sparse bumps") {
  Example2Params b;
  const SpeedProfile prof = SpeedProfile::example2(b);
  CertificateOptions o;
  o.kind = CertificateKind::zones_theta;
  o.horizon = 300.0;
  o.per_decade = 16;
  const CertificateReport rep = certify(prof, certificate_xi_samples(4), o);
  CHECK(rep.pass);
  const CertificateSetup& st = rep.setup;
  CHECK(st.max_eigen_residual <= 1e-10);
  CHECK(st.max_delta2 <= 0.5);
  CHECK(st.max_radicand_ratio <= 0.25);
  CHECK(st.partition.n >= o.n_start);
  for (const auto& m : rep.modes) {
    CHECK(m.envelope.t_xi >= st.partition.t0);
    CHECK(m.envelope.log_lower_const <= 0.0);
    CHECK(m.envelope.log_upper_const >= 0.0);
  }
}

TEST_CASE("N escalation gives up at the cap") {
  Example2Params b;
  b.m = 3;
  const SpeedProfile prof = SpeedProfile::example2(b);
  CertificateOptions o;
  o.kind = CertificateKind::zones_theta;
  o.n_start = 0.25;
  o.n_cap = 0.25;
  CHECK_THROWS_AS(prepare_certificate(prof, certificate_xi_samples(8), o), NumericalError);
}

TEST_CASE("Lambda threshold for power laws") {
  const SpeedProfile prof = example1(0.0, 0.5, 0.0, 3);
  // Theta(Lambda^{-1}(s)) = s^2 for s >= 1, so k (n/x)^2 <= 2 (N0/x)^2 gives N0 = n sqrt(k/2).
  const double n0 = lambda_threshold(prof, 8.0, 3.0, {0.5, 1.0, 2.0});
  CHECK(n0 == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("Lambda-zone certificate yields a finite global constant") {
  const SpeedProfile prof = example1(0.0, 0.5, 0.0, 3);
  CertificateOptions o;
  o.kind = CertificateKind::zones_lambda;
  o.horizon = 300.0;
  o.per_decade = 16;
  const CertificateReport rep = certify(prof, certificate_xi_samples(4), o);
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.lambda.log_c_theory));
  CHECK(rep.lambda.log_c_fit <= rep.lambda.log_c_theory);
  CHECK(rep.lambda.n0 > 0.0);
}

TEST_CASE("certificate CSV") {
  const SpeedProfile prof = example1(2.0, 0.0, 0.0, 1);
  CertificateOptions o;
  o.kind = CertificateKind::bounded_theta;
  o.horizon = 10.0;
  o.per_decade = 4;
  const CsvTable t = certify(prof, certificate_xi_samples(2), o).to_csv();
  CHECK(t.rows() == 2u);
  CHECK(t.columns() ==
        std::vector<std::string>{"xi_norm", "t_xi", "N_used", "lower", "upper", "measured_min", "measured_max", "pass"});
}
