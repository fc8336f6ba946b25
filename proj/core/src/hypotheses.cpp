#include "sdwave/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <stdexcept>

#include "sdwave/quadrature.hpp"

namespace sdwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HypothesisRecord tail_rule(Hypothesis which, const std::vector<double>& times,
                           const std::vector<double>& ratios, double horizon) {
  HypothesisRecord rec;
  rec.which = which;
  rec.evaluated = true;
  double sup_before = 0.0;
  double sup_tail = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double v = ratios[i];
    if (!std::isfinite(v)) finite = false;
    if (i == 0 || v > rec.grid_supremum) {
      rec.grid_supremum = v;
      rec.worst_t = times[i];
    }
    double& bucket = times[i] >= horizon / 10.0 ? sup_tail : sup_before;
    bucket = std::max(bucket, v);
  }
  rec.holds = finite && sup_tail <= (1.0 + kTailSlack) * sup_before;
  rec.fitted_constant = rec.holds ? rec.grid_supremum : kInf;
  if (!finite) {
    rec.note = "ratio not finite";
  } else if (!rec.holds) {
    rec.note = fmt::format("supremum grows over the last decade ({:.6g} after vs {:.6g} before)", sup_tail,
                           sup_before);
  }
  return rec;
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b, double horizon) {
  for (double x : b) {
    if (x <= horizon) a.push_back(x);
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::h1: return "H1*";
    case Hypothesis::h2: return "H2*";
    case Hypothesis::h3: return "H3*";
    case Hypothesis::h4: return "H4*";
    case Hypothesis::h5: return "H5*";
    case Hypothesis::h6: return "H6*";
    case Hypothesis::lambda_infinity: return "La-infty";
  }
  return "?";
}

const HypothesisRecord& HypothesisReport::get(Hypothesis h) const {
  for (const auto& r : records) {
    if (r.which == h) return r;
  }
  throw std::out_of_range("hypothesis " + to_string(h) + " not in report");
}

bool HypothesisReport::holds(Hypothesis h) const {
  for (const auto& r : records) {
    if (r.which == h) return r.evaluated && r.holds;
  }
  return false;
}

VerificationGrid VerificationGrid::standard(double horizon) {
  if (!(horizon > 1.0)) throw std::invalid_argument("verification horizon must exceed 1");
  VerificationGrid g;
  for (int i = 0; i < 128; ++i) g.times.push_back(static_cast<double>(i) / 128.0);
  for (int i = 0; i < 512; ++i) g.times.push_back(std::pow(horizon, static_cast<double>(i) / 511.0));
  return g;
}

VerificationGrid VerificationGrid::refined(int factor) const {
  VerificationGrid g;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    for (int k = 0; k < factor; ++k) {
      g.times.push_back(times[i] + (times[i + 1] - times[i]) * k / factor);
    }
  }
  if (!times.empty()) g.times.push_back(times.back());
  return g;
}

HypothesisRequest HypothesisRequest::applicable(const SpeedProfile& profile) {
  HypothesisRequest r;
  r.h4 = profile.m() >= 2;
  r.lambda_family = profile.lambda().has_value() && profile.m() >= 2;
  return r;
}

std::vector<double> stabilization_integral(const SpeedProfile& profile, const std::vector<double>& times) {
  const double t_end = times.empty() ? 0.0 : times.back();
  const auto breaks = profile.breakpoints(t_end);
  const double a_inf = profile.a_inf();
  const auto f = [&](double s) { return std::abs(profile.a(s) - a_inf); };
  const auto hint = [&](double s) { return profile.step_hint(s); };
  std::vector<double> out;
  out.reserve(times.size());
  double acc = 0.0;
  double prev = 0.0;
  for (double t : times) {
    if (t < prev) throw std::invalid_argument("stabilization_integral needs sorted times");
    acc += integrate_pieces(f, prev, t, breaks, hint, 1e-10);
    out.push_back(acc);
    prev = t;
  }
  return out;
}

HypothesisReport verify_hypotheses(const SpeedProfile& profile, const VerificationGrid& grid, double horizon,
                                   const HypothesisRequest& request) {
  const int m = profile.m();
  if (request.h4 && m < 2) throw std::invalid_argument("H4* needs m >= 2");
  if (request.lambda_family && !profile.lambda()) throw std::invalid_argument("H5*/H6* need a Lambda");
  if (request.lambda_family && m < 2) throw std::invalid_argument("H6* needs m >= 2");

  std::vector<double> times;
  for (double t : grid.times) {
    if (t >= 0.0 && t <= horizon) times.push_back(t);
  }
  if (times.empty()) throw std::invalid_argument("verification grid has no points in [0, horizon]");
  std::sort(times.begin(), times.end());
  const std::vector<double> dense =
      merged(VerificationGrid{times}.refined(8).times, profile.check_points(horizon), horizon);

  const PowerLog& theta = profile.theta();
  const PowerLog& xi = profile.xi();
  HypothesisReport rep;
  rep.horizon = horizon;
  rep.derivative_constants.assign(static_cast<std::size_t>(m) + 1, 0.0);

  auto ratios_on = [&](const std::vector<double>& ts, auto&& fn) {
    std::vector<double> r;
    r.reserve(ts.size());
    for (double t : ts) r.push_back(fn(t));
    return r;
  };

  if (request.h1) {
    const auto integral = stabilization_integral(profile, times);
    std::vector<double> r(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) r[i] = integral[i] / theta(times[i]);
    rep.records.push_back(tail_rule(Hypothesis::h1, times, r, horizon));
  }
  if (request.h2) {
    HypothesisRecord worst;
    worst.which = Hypothesis::h2;
    worst.evaluated = true;
    worst.holds = true;
    for (int k = 1; k <= m; ++k) {
      const auto r = ratios_on(dense, [&](double t) {
        return std::abs(profile.derivative(t, k)) * std::pow(xi(t), k);
      });
      const auto rec = tail_rule(Hypothesis::h2, dense, r, horizon);
      rep.derivative_constants[static_cast<std::size_t>(k)] = rec.grid_supremum;
      if (!rec.holds) {
        worst.holds = false;
        worst.note = fmt::format("k = {}: {}", k, rec.note);
      }
      if (rec.grid_supremum >= worst.grid_supremum) {
        worst.grid_supremum = rec.grid_supremum;
        worst.worst_t = rec.worst_t;
      }
    }
    worst.fitted_constant = worst.holds ? worst.grid_supremum : kInf;
    rep.records.push_back(worst);
  }
  if (request.h3) {
    const auto r = ratios_on(times, [&](double t) { return theta(t) / xi(t); });
    rep.records.push_back(tail_rule(Hypothesis::h3, times, r, horizon));
  }
  if (request.h4) {
    const auto r = ratios_on(times, [&](double t) {
      return std::pow(theta(t), m - 1) * xi.tail_integral_inverse_power(t, m);
    });
    rep.records.push_back(tail_rule(Hypothesis::h4, times, r, horizon));
  }
  if (request.lambda_family) {
    const PowerLog& lam = *profile.lambda();
    const auto r5 = ratios_on(times, [&](double t) { return lam(t) / xi(t); });
    rep.records.push_back(tail_rule(Hypothesis::h5, times, r5, horizon));
    const auto r6 = ratios_on(times, [&](double t) {
      return std::pow(lam(t), m) / theta(t) * xi.tail_integral_inverse_power(t, m);
    });
    rep.records.push_back(tail_rule(Hypothesis::h6, times, r6, horizon));

    HypothesisRecord li;
    li.which = Hypothesis::lambda_infinity;
    li.evaluated = true;
    bool monotone = lam.is_nondecreasing() && lam.is_unbounded();
    double prev = 0.0;
    for (double t : times) {
      const double q = theta(t) / lam(t);
      if (q < prev * (1.0 - 1e-12)) {
        monotone = false;
        li.worst_t = t;
      }
      prev = q;
    }
    const bool unbounded = (theta / lam).is_unbounded();
    li.holds = monotone && unbounded;
    li.grid_supremum = prev;
    li.fitted_constant = prev;
    if (!monotone) li.note = "Theta/Lambda decreases on the grid or Lambda is not increasing";
    if (!unbounded) li.note = "Theta/Lambda stays bounded";
    rep.records.push_back(li);
  }

  const bool h1 = rep.holds(Hypothesis::h1);
  const bool h2 = rep.holds(Hypothesis::h2);
  rep.case_i = h1 && !theta.is_unbounded();
  rep.case_ii = h2 && m == 1 && std::isfinite(xi.integral_inverse(kInf));
  rep.case_iii = h1 && h2 && rep.holds(Hypothesis::h3) && rep.holds(Hypothesis::h4);
  rep.lambda_case = h1 && h2 && rep.holds(Hypothesis::h5) && rep.holds(Hypothesis::h6) &&
                    rep.holds(Hypothesis::lambda_infinity);
  return rep;
}

HypothesisReport verify_hypotheses(const SpeedProfile& profile, const VerificationGrid& grid, double horizon) {
  return verify_hypotheses(profile, grid, horizon, HypothesisRequest::applicable(profile));
}

PowerLog calibrated_theta(const SpeedProfile& profile, const HypothesisReport& report) {
  const auto& h1 = report.get(Hypothesis::h1);
  const double c = std::isfinite(h1.fitted_constant) ? h1.fitted_constant : h1.grid_supremum;
  return profile.theta().scaled(std::max(1.0, 1.01 * c));
}

}  // namespace sdwave
