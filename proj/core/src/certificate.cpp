#include "sdwave/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sdwave/errors.hpp"
#include "sdwave/parallel.hpp"
#include "sdwave/quadrature.hpp"

namespace sdwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallness thresholds of the chain at hyperbolic points.
constexpr double kMaxRadicandRatio = 0.25;
constexpr double kMaxDelta2 = 0.5;
constexpr double kMaxCorrectionRatio = 0.25;

bool is_zone_kind(CertificateKind k) {
  return k == CertificateKind::zones_theta || k == CertificateKind::zones_lambda;
}

HypothesisRequest request_for(CertificateKind kind) {
  HypothesisRequest r;
  switch (kind) {
    case CertificateKind::bounded_theta:
      r.h2 = r.h3 = r.h4 = r.lambda_family = false;
      break;
    case CertificateKind::integrable_xi:
      r.h1 = r.h3 = r.h4 = r.lambda_family = false;
      break;
    case CertificateKind::zones_theta:
      r.lambda_family = false;
      break;
    case CertificateKind::zones_lambda:
      r.h3 = r.h4 = false;
      break;
  }
  return r;
}

bool case_holds(const HypothesisReport& rep, CertificateKind kind) {
  switch (kind) {
    case CertificateKind::bounded_theta: return rep.case_i;
    case CertificateKind::integrable_xi: return rep.case_ii;
    case CertificateKind::zones_theta: return rep.case_iii;
    case CertificateKind::zones_lambda: return rep.lambda_case;
  }
  return false;
}

std::string failing_hypotheses(const HypothesisReport& rep) {
  std::string s;
  for (const auto& r : rep.records) {
    if (r.evaluated && !r.holds) s += fmt::format(" {} ({})", to_string(r.which), r.note);
  }
  return s.empty() ? " none individually; case conditions on Theta/Xi/m not met" : s;
}

std::vector<double> hyperbolic_points(const SpeedProfile& profile, double t_xi, double horizon,
                                      const std::vector<double>& times) {
  std::vector<double> pts;
  if (!(t_xi <= horizon)) return pts;
  pts.push_back(t_xi);
  for (double t : times) {
    if (t > t_xi && t <= horizon) pts.push_back(t);
  }
  for (double t : profile.check_points(horizon)) {
    if (t > t_xi && t <= horizon) pts.push_back(t);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

struct SmallnessScan {
  bool ok = true;
  std::string failure;
  double radicand = 0.0;
  double delta2 = 0.0;
  double correction = 0.0;
  double residual = 0.0;
};

SmallnessScan scan_smallness(const SpeedProfile& profile, int m, double xi, const std::vector<double>& pts) {
  SmallnessScan s;
  for (double t : pts) {
    DiagChain chain;
    try {
      chain = build_chain(profile, xi, t, m);
    } catch (const NumericalError& e) {
      s.ok = false;
      s.failure = fmt::format("chain breakdown at t = {:.6g}, |xi| = {:.6g}: {}", t, xi, e.what());
      return s;
    }
    for (std::size_t k = 0; k < chain.levels.size(); ++k) {
      const auto& l = chain.levels[k];
      const double d2 = std::norm(l.delta);
      s.radicand = std::max(s.radicand, l.radicand_ratio);
      s.delta2 = std::max(s.delta2, d2);
      s.correction = std::max(s.correction, l.correction_ratio);
      s.residual = std::max(s.residual, l.eigen_residual);
      const char* bad = l.radicand_ratio > kMaxRadicandRatio ? "(|r_k|/phi_kIm)^2 <= 1/4"
                        : d2 > kMaxDelta2                    ? "|delta_k|^2 <= 1/2"
                        : l.correction_ratio > kMaxCorrectionRatio
                            ? "Im(conj(delta_k) r_k+1)/phi_kIm <= 1/4"
                            : nullptr;
      if (bad != nullptr && s.ok) {
        s.ok = false;
        s.failure = fmt::format("{} fails at level {}, t = {:.6g}, |xi| = {:.6g}", bad, k + 1, t, xi);
      }
    }
  }
  return s;
}

double log_max1(double x) { return std::max(0.0, std::log(x)); }
double log_min1(double x) { return std::min(0.0, std::log(x)); }

}  // namespace

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::bounded_theta: return "bounded-theta";
    case CertificateKind::integrable_xi: return "integrable-xi";
    case CertificateKind::zones_theta: return "zones-theta";
    case CertificateKind::zones_lambda: return "zones-lambda";
  }
  return "?";
}

double lambda_threshold(const SpeedProfile& profile, double k, double n, const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("lambda_threshold needs sample points");
  const double log_k = std::log(k);
  const auto ok = [&](double n0) {
    for (double x : xs) {
      const double lhs = log_k + std::log(theta_of_lambda_inverse(profile, n / x));
      const double rhs = std::log(2.0) + std::log(theta_of_lambda_inverse(profile, n0 / x));
      if (lhs > rhs) return false;
    }
    return true;
  };
  double hi = n;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e15) throw NumericalError("no finite N0 converts the Lambda-zone exponent");
  }
  double lo = hi / 2.0;
  while (ok(lo) && lo > 1e-12) {
    hi = lo;
    lo /= 2.0;
  }
  while ((hi - lo) > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<double> certificate_xi_samples(int count) {
  if (count < 1) throw std::invalid_argument("need at least one xi sample");
  std::vector<double> xs;
  for (int j = 0; j < count; ++j) {
    xs.push_back(2.0 * std::sin(std::numbers::pi * (j + 1) / count / 2.0));
  }
  return xs;
}

ModeInit certificate_init(const SpeedProfile& profile, double xi_norm) {
  return {Complex{1.0, 0.0}, Complex{0.0, 0.5 * profile.a(0.0) * xi_norm}};
}

CertificateSetup prepare_certificate(const SpeedProfile& profile, const std::vector<double>& xi_norms,
                                     const CertificateOptions& opts) {
  CertificateSetup st;
  st.kind = opts.kind;
  st.m = opts.m > 0 ? opts.m : profile.m();
  st.dim = opts.dim;
  st.horizon = opts.horizon;
  if (st.m > profile.m()) throw std::invalid_argument("chain length exceeds the profile's derivative order m");
  if (is_zone_kind(opts.kind) && st.m < 2) throw std::invalid_argument("zone certificates need m >= 2");

  st.hypotheses = verify_hypotheses(profile, VerificationGrid::standard(opts.hypothesis_horizon),
                                    opts.hypothesis_horizon, request_for(opts.kind));
  if (!case_holds(st.hypotheses, opts.kind)) {
    throw HypothesisFailure(fmt::format("hypotheses for the {} certificate do not verify:{}", to_string(opts.kind),
                                        failing_hypotheses(st.hypotheses)));
  }
  if (st.hypotheses.derivative_constants.size() > 1) st.c1 = st.hypotheses.derivative_constants[1];
  if (opts.kind != CertificateKind::integrable_xi) st.theta_c = calibrated_theta(profile, st.hypotheses);
  if (!is_zone_kind(opts.kind)) return st;

  const PowerLog control = opts.kind == CertificateKind::zones_theta ? st.theta_c : *profile.lambda();
  const ZoneFlavor flavor = opts.kind == CertificateKind::zones_theta ? ZoneFlavor::theta : ZoneFlavor::lambda;
  const auto times = sample_schedule(opts.horizon, opts.per_decade);

  std::string last_failure = "no hyperbolic samples";
  for (double n = opts.n_start; n <= opts.n_cap; n *= 2.0, ++st.escalations) {
    st.partition = make_zone_partition(control, n, opts.dim, flavor);
    std::vector<SmallnessScan> scans(xi_norms.size());
    std::vector<std::vector<double>> pts(xi_norms.size());
    parallel_for(xi_norms.size(), opts.threads, [&](std::size_t i) {
      pts[i] = hyperbolic_points(profile, zone_boundary(st.partition, xi_norms[i]), opts.horizon, times);
      scans[i] = scan_smallness(profile, st.m, xi_norms[i], pts[i]);
    });
    bool ok = true;
    for (const auto& s : scans) {
      if (!s.ok) {
        ok = false;
        last_failure = s.failure;
        break;
      }
    }
    if (!ok) continue;

    std::vector<SymbolSample> samples;
    for (std::size_t i = 0; i < xi_norms.size(); ++i) {
      for (double t : pts[i]) samples.push_back({t, xi_norms[i]});
      st.max_radicand_ratio = std::max(st.max_radicand_ratio, scans[i].radicand);
      st.max_delta2 = std::max(st.max_delta2, scans[i].delta2);
      st.max_correction_ratio = std::max(st.max_correction_ratio, scans[i].correction);
      st.max_eigen_residual = std::max(st.max_eigen_residual, scans[i].residual);
    }
    if (samples.empty()) {
      st.c_rm_holds = true;
    } else {
      const auto fit =
          verify_symbol_class(chain_entry(profile, st.m, st.m, ChainEntry::r), 0, 1 - st.m, st.m, profile, samples);
      st.c_rm = fit.constant;
      st.c_rm_holds = fit.holds;
    }
    return st;
  }
  throw NumericalError(fmt::format("N escalation exceeded {} : {}", opts.n_cap, last_failure));
}

ModeEnvelope bound_certificate(const SpeedProfile& profile, const CertificateSetup& setup, double xi_norm,
                               const std::vector<double>& times) {
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("certificate times must be sorted");
  ModeEnvelope env;
  env.xi_norm = xi_norm;
  env.times = times;
  env.t_xi = kInf;
  const double a0 = profile.a0();
  const double a1 = profile.a1();
  const double a_inf = profile.a_inf();
  const double a_start = profile.a(0.0);
  const double k_psi = 2.0 * a1 / a0;

  if (setup.kind == CertificateKind::bounded_theta) {
    const double expo = 4.0 * std::sqrt(static_cast<double>(setup.dim)) * a1 / a0 * setup.theta_c.limit();
    env.log_upper_const = log_max1(a1 * a1 / (a_inf * a_inf)) + expo + log_max1(a_inf * a_inf / (a_start * a_start));
    env.log_lower_const = log_min1(a0 * a0 / (a_inf * a_inf)) - expo + log_min1(a_inf * a_inf / (a_start * a_start));
  } else if (setup.kind == CertificateKind::integrable_xi) {
    const double expo = 2.0 * setup.c1 / a0 * profile.xi().integral_inverse(kInf);
    env.log_upper_const = expo;
    env.log_lower_const = -expo;
  }
  if (!is_zone_kind(setup.kind)) {
    env.log_upper.assign(times.size(), env.log_upper_const);
    env.log_lower.assign(times.size(), env.log_lower_const);
    return env;
  }

  const auto psi_up = [&](double t) {
    if (t == 0.0) return 0.0;
    const double at = profile.a(t);
    return log_max1(at * at / (a_inf * a_inf)) + k_psi * xi_norm * setup.theta_c(t) +
           log_max1(a_inf * a_inf / (a_start * a_start));
  };
  const auto psi_lo = [&](double t) {
    if (t == 0.0) return 0.0;
    const double at = profile.a(t);
    return log_min1(at * at / (a_inf * a_inf)) - k_psi * xi_norm * setup.theta_c(t) +
           log_min1(a_inf * a_inf / (a_start * a_start));
  };

  const double t_xi = zone_boundary(setup.partition, xi_norm);
  env.t_xi = t_xi;
  const int m = setup.m;
  const bool hyperbolic = t_xi <= setup.horizon;

  struct ChainWeights {
    double log_a;
    double log_w;      // sum log(1 - |delta_k|^2)
    double log_plus;   // sum log(1 + |delta_k|)
    double log_minus;  // sum log(1 - |delta_k|)
  };
  const auto weights = [&](double t) {
    const DiagChain c = build_chain(profile, xi_norm, t, m);
    ChainWeights w{std::log(profile.a(t)), 0.0, 0.0, 0.0};
    for (const auto& l : c.levels) {
      const double d = std::abs(l.delta);
      w.log_w += std::log1p(-d * d);
      w.log_plus += std::log1p(d);
      w.log_minus += std::log1p(-d);
    }
    return w;
  };

  ChainWeights w_xi{};
  double base_up = 0.0;
  double base_lo = 0.0;
  if (hyperbolic) {
    w_xi = weights(t_xi);
    base_up = psi_up(t_xi);
    base_lo = psi_lo(t_xi);
  }
  const auto rm_abs = [&](double s) { return std::abs(build_chain(profile, xi_norm, s, m).final_system.r); };
  const auto breaks = profile.breakpoints(setup.horizon);
  const auto hint = [&](double s) { return profile.step_hint(s); };

  double integral = 0.0;
  double prev = t_xi;
  env.log_upper.reserve(times.size());
  env.log_lower.reserve(times.size());
  for (double t : times) {
    if (!hyperbolic || t < t_xi) {
      env.log_upper.push_back(psi_up(t));
      env.log_lower.push_back(psi_lo(t));
      continue;
    }
    if (t > prev) integral += integrate_pieces(rm_abs, prev, t, breaks, hint, 1e-8);
    prev = t;
    const ChainWeights w = weights(t);
    const double common = (w.log_a - w_xi.log_a) + (w_xi.log_w - w.log_w);
    env.log_upper.push_back(base_up + common + 2.0 * integral + 2.0 * w.log_plus - 2.0 * w_xi.log_minus);
    env.log_lower.push_back(base_lo + common - 2.0 * integral + 2.0 * w.log_minus - 2.0 * w_xi.log_plus);
  }
  const double tail =
      hyperbolic ? setup.c_rm * std::pow(xi_norm, 1 - m) * profile.xi().tail_integral_inverse_power(setup.horizon, m)
                 : 0.0;
  env.log_upper_const = *std::max_element(env.log_upper.begin(), env.log_upper.end()) + 2.0 * tail;
  env.log_lower_const = *std::min_element(env.log_lower.begin(), env.log_lower.end()) - 2.0 * tail;
  return env;
}

CertificateReport certify(const SpeedProfile& profile, const std::vector<double>& xi_norms,
                          const CertificateOptions& opts) {
  if (xi_norms.empty()) throw std::invalid_argument("certify needs at least one xi");
  for (double x : xi_norms) {
    if (!(x > 0.0 && x <= 2.0)) throw std::invalid_argument("certificate modes need 0 < |xi| <= 2");
  }
  const auto times = sample_schedule(opts.horizon, opts.per_decade);
  CertificateReport rep;
  CertificateOptions run = opts;
  std::vector<ModeEnvelope> envs(xi_norms.size());
  while (true) {
    rep.setup = prepare_certificate(profile, xi_norms, run);
    try {
      parallel_for(xi_norms.size(), opts.threads,
                   [&](std::size_t i) { envs[i] = bound_certificate(profile, rep.setup, xi_norms[i], times); });
      break;
    } catch (const NumericalError& e) {
      // The chain broke down between smallness samples: escalate past the current N.
      if (!is_zone_kind(opts.kind) || rep.setup.partition.n * 2.0 > opts.n_cap) throw;
      run.n_start = rep.setup.partition.n * 2.0;
    }
  }

  rep.modes.resize(xi_norms.size());
  parallel_for(xi_norms.size(), opts.threads, [&](std::size_t i) {
    ModeCertificate& mc = rep.modes[i];
    mc.envelope = std::move(envs[i]);
    const auto states = sample_mode(profile, FrequencyPoint::from_xi_norm(xi_norms[i]),
                                    certificate_init(profile, xi_norms[i]), times, opts.solver);
    const double log_e0 = std::log(energy_density(states.front(), profile));
    mc.worst_margin = -kInf;
    mc.log_measured_min = kInf;
    mc.log_measured_max = -kInf;
    for (std::size_t j = 0; j < states.size(); ++j) {
      const double lm = std::log(energy_density(states[j], profile)) - log_e0;
      mc.log_measured.push_back(lm);
      mc.log_measured_min = std::min(mc.log_measured_min, lm);
      mc.log_measured_max = std::max(mc.log_measured_max, lm);
      mc.worst_margin =
          std::max({mc.worst_margin, lm - mc.envelope.log_upper[j], mc.envelope.log_lower[j] - lm});
    }
    mc.pass = mc.worst_margin <= opts.log_slack;
  });

  rep.pass = std::all_of(rep.modes.begin(), rep.modes.end(), [](const auto& m) { return m.pass; });

  if (opts.kind == CertificateKind::zones_lambda) {
    const double scale = rep.setup.theta_c(0.0) / profile.theta()(0.0);
    const double k = 2.0 * profile.a1() / profile.a0() * scale;
    const double n = rep.setup.partition.n;
    std::vector<double> xs = xi_norms;
    for (int i = 0; i <= 400; ++i) xs.push_back(std::pow(10.0, -6.0 + i * 6.0 / 400.0) * 2.0);
    rep.lambda.n0 = lambda_threshold(profile, k, n, xs);
    rep.lambda.log_c_theory = -kInf;
    rep.lambda.log_c_fit = -kInf;
    for (std::size_t i = 0; i < xi_norms.size(); ++i) {
      const double x = xi_norms[i];
      const auto& mc = rep.modes[i];
      rep.lambda.log_c_theory = std::max(rep.lambda.log_c_theory,
                                         mc.envelope.log_upper_const - k * x * theta_of_lambda_inverse(profile, n / x));
      rep.lambda.log_c_fit = std::max(rep.lambda.log_c_fit,
                                      mc.log_measured_max - 2.0 * x * theta_of_lambda_inverse(profile, rep.lambda.n0 / x));
    }
    rep.pass = rep.pass && rep.lambda.log_c_fit <= rep.lambda.log_c_theory + opts.log_slack;
  }
  return rep;
}

CsvTable CertificateReport::to_csv() const {
  CsvTable t({"xi_norm", "t_xi", "N_used", "lower", "upper", "measured_min", "measured_max", "pass"});
  const bool zones = is_zone_kind(setup.kind);
  for (const auto& m : modes) {
    t.row()
        .add(m.envelope.xi_norm)
        .add(m.envelope.t_xi)
        .add(zones ? setup.partition.n : 0.0)
        .add(std::exp(m.envelope.log_lower_const))
        .add(std::exp(m.envelope.log_upper_const))
        .add(std::exp(m.log_measured_min))
        .add(std::exp(m.log_measured_max))
        .add(m.pass);
  }
  return t;
}

}  // namespace sdwave
