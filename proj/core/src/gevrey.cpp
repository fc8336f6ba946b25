#include "sdwave/gevrey.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sdwave/errors.hpp"
#include "sdwave/quadrature.hpp"

namespace sdwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLinearScanLimit = 170.0;  // j! still finite in double
constexpr double kIndexCap = 1e300;
constexpr double kGrowthSlack = std::log(1.05);

bool log_convex(const std::vector<double>& log_values) {
  for (std::size_t j = 1; j + 1 < log_values.size(); ++j) {
    const double lhs = log_values[j] - log_values[j - 1];
    const double rhs = log_values[j + 1] - log_values[j];
    if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) return false;
  }
  return true;
}

}  // namespace

LogConvexSequence LogConvexSequence::factorial_power(double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("factorial power needs nu >= 0");
  LogConvexSequence s;
  s.kind_ = SequenceKind::factorial_power;
  s.a_ = nu;
  return s;
}

LogConvexSequence LogConvexSequence::exponential(double b, double sigma) {
  if (!(b >= 0.0) || !(sigma >= 1.0)) throw std::invalid_argument("exponential sequence needs b >= 0, sigma >= 1");
  LogConvexSequence s;
  s.kind_ = SequenceKind::exponential;
  s.a_ = 1.0;
  s.b_ = b;
  s.sigma_ = sigma;
  return s;
}

LogConvexSequence LogConvexSequence::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sequence table is empty");
  LogConvexSequence s;
  s.kind_ = SequenceKind::table;
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("sequence values must be positive");
    s.log_table_.push_back(std::log(v));
  }
  if (!log_convex(s.log_table_)) throw std::invalid_argument("sequence table is not log-convex");
  return s;
}

std::optional<std::size_t> LogConvexSequence::size() const {
  if (kind_ == SequenceKind::table) return log_table_.size();
  return std::nullopt;
}

double LogConvexSequence::log_term(double j) const {
  if (kind_ == SequenceKind::table) return log_table_.at(static_cast<std::size_t>(j));
  return a_ * std::lgamma(j + 1.0) + (b_ == 0.0 ? 0.0 : b_ * std::pow(j, sigma_));
}

double LogConvexSequence::log_ratio(double j) const {
  if (kind_ == SequenceKind::table) {
    const auto i = static_cast<std::size_t>(j);
    return log_table_.at(i + 1) - log_table_.at(i);
  }
  return a_ * std::log(j + 1.0) + (b_ == 0.0 ? 0.0 : b_ * (std::pow(j + 1.0, sigma_) - std::pow(j, sigma_)));
}

LogConvexSequence LogConvexSequence::divided_by_factorial() const {
  LogConvexSequence s = *this;
  if (kind_ == SequenceKind::table) {
    for (std::size_t j = 0; j < s.log_table_.size(); ++j) s.log_table_[j] -= std::lgamma(j + 1.0);
    if (!log_convex(s.log_table_)) throw std::invalid_argument("M_j / j! is not log-convex");
    return s;
  }
  if (a_ < 1.0) throw std::invalid_argument("M_j / j! is not log-convex for a factorial power below 1");
  s.a_ = a_ - 1.0;
  return s;
}

AssociatedValue associated_function(const LogConvexSequence& input, double tau, AssociatedMode mode) {
  if (!(tau >= 0.0)) throw std::invalid_argument("associated function needs tau >= 0");
  const LogConvexSequence seq = mode == AssociatedMode::raw ? input : input.divided_by_factorial();
  AssociatedValue out;
  if (tau == 0.0) {
    out.log_value = -seq.log_term(0.0);
    out.value = std::exp(out.log_value);
    return out;
  }
  const double lt = std::log(tau);

  if (seq.kind() == SequenceKind::table) {
    const std::size_t n = *seq.size();
    std::size_t j = 0;
    double prev_ratio = -kInf;
    while (j + 1 < n && seq.log_ratio(static_cast<double>(j)) < lt) {
      const double r = seq.log_ratio(static_cast<double>(j));
      if (r < prev_ratio) throw std::logic_error("associated function scan is not unimodal");
      prev_ratio = r;
      ++j;
    }
    if (n > 1 && j + 1 == n) {
      // Still increasing at the end of the table.
      out.infinite = true;
      out.log_value = kInf;
      out.value = kInf;
      out.argmax = static_cast<double>(j);
      return out;
    }
    out.argmax = static_cast<double>(j);
    out.log_value = j * lt - seq.log_term(static_cast<double>(j));
    out.value = std::exp(out.log_value);
    return out;
  }

  // Closed forms: the increments log M_{j+1} - log M_j are nondecreasing, so the
  // supremum sits at the first j whose increment reaches log tau.
  if (seq.log_ratio(0.0) >= lt) {
    out.log_value = -seq.log_term(0.0);
    out.value = std::exp(out.log_value);
    return out;
  }
  double hi = 1.0;
  while (seq.log_ratio(hi) < lt) {
    hi *= 2.0;
    if (hi > kIndexCap) {
      out.infinite = true;
      out.log_value = kInf;
      out.value = kInf;
      out.argmax = kInf;
      return out;
    }
  }
  double lo = 0.0;  // log_ratio(lo) < lt <= log_ratio(hi)
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (mid == lo || mid == hi) break;  // beyond 2^53 indices are no longer exact
    (seq.log_ratio(mid) < lt ? lo : hi) = mid;
  }
  const double jstar = hi;
  out.argmax = jstar;
  if (jstar <= kLinearScanLimit) {
    // Linear-domain product keeps small cases exact, e.g. T[j!](4) = 32/3.
    double term = std::exp(-seq.log_term(0.0));
    double best = term;
    for (int j = 0; j < static_cast<int>(jstar); ++j) {
      const double growth = seq.b() == 0.0 ? 1.0
                                           : std::exp(seq.b() * (std::pow(j + 1.0, seq.sigma()) - std::pow(j, seq.sigma())));
      const double ratio = std::pow(j + 1.0, seq.factorial_exponent()) * growth;
      term = term * tau / ratio;
      best = std::max(best, term);
    }
    if (std::isfinite(best)) {
      out.value = best;
      out.log_value = std::log(best);
      return out;
    }
  }
  out.log_value = jstar * lt - seq.log_term(jstar);
  out.value = std::exp(out.log_value);
  return out;
}

LValue L_constant(double n, const LogConvexSequence& seq, const SpeedProfile& profile) {
  if (!(n > 0.0)) throw std::invalid_argument("L needs N > 0");
  const auto g = [&](double tau) {
    const auto t = associated_function(seq, tau, AssociatedMode::factorial_divided);
    if (t.infinite) return kInf;
    return t.log_value - theta_of_lambda_inverse(profile, n * tau) / tau;
  };
  std::vector<double> taus;
  std::vector<double> vals;
  const auto push_decades = [&](double from_exp, double to_exp, int per_decade) {
    const int count = static_cast<int>(std::lround((to_exp - from_exp) * per_decade));
    for (int i = taus.empty() ? 0 : 1; i <= count; ++i) {
      const double tau = std::pow(10.0, from_exp + (to_exp - from_exp) * i / count);
      taus.push_back(tau);
      vals.push_back(g(tau));
    }
  };
  push_decades(0.0, 6.0, 100);
  double top = 6.0;
  auto argmin = [&] { return static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin()); };
  // Both parts of the log ratio grow with tau; extend only while their
  // difference is still resolved in double precision.
  const auto resolved = [&](double tau) {
    const auto t = associated_function(seq, tau, AssociatedMode::factorial_divided);
    if (t.infinite) return false;
    const double e = theta_of_lambda_inverse(profile, n * tau) / tau;
    const double rounding = 1e-15 * std::max(std::abs(t.log_value), e);
    return rounding < 1e-3 + 1e-6 * std::abs(t.log_value - e);
  };
  while (argmin() + 1 == vals.size() && top < 100.0 && resolved(std::pow(10.0, top + 1.0))) {
    push_decades(top, top + 1.0, 100);
    top += 1.0;
  }
  LValue out;
  const std::size_t i = argmin();
  if (i + 1 == vals.size()) {
    // Still decreasing where the grid ends: the ratio tends to zero.
    out.log_value = -kInf;
    out.value = 0.0;
    out.positive = false;
    out.converged = vals.back() < std::log(std::numeric_limits<double>::min());
    out.argmin_tau = taus.back();
    return out;
  }
  double best = vals[i];
  double best_tau = taus[i];
  if (i > 0 && std::isfinite(best)) {
    const auto h = [&](double u) { return g(std::exp(u)); };
    const auto r = boost::math::tools::brent_find_minima(h, std::log(taus[i - 1]), std::log(taus[i + 1]), 40);
    if (r.second < best) {
      best = r.second;
      best_tau = std::exp(r.first);
    }
  }
  out.log_value = best;
  out.value = std::exp(best);
  out.positive = true;
  out.converged = true;
  out.argmin_tau = best_tau;
  return out;
}

UValue u_functional(double n, const LogSpectrum& log_spectrum, const SpeedProfile& profile) {
  if (!(n > 0.0)) throw std::invalid_argument("U needs N > 0");
  const auto log_f = [&](double theta) {
    const double ls = log_spectrum(theta);
    const double xi = 2.0 * std::abs(std::sin(theta / 2.0));
    if (ls == -kInf || xi == 0.0) return -kInf;
    return 2.0 * xi * theta_of_lambda_inverse(profile, n / xi) + ls;
  };
  constexpr int kMaxShells = 200;
  constexpr int kQuietShells = 3;
  constexpr int kPeakSamples = 64;
  const double quiet_level = std::log(1e-17);
  UValue out;
  double total = -kInf;
  const auto log_add = [](double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  };
  for (double side : {1.0, -1.0}) {
    int quiet = 0;
    bool done = false;
    for (int s = 0; s < kMaxShells && !done; ++s) {
      const double hi = std::numbers::pi * std::ldexp(1.0, -s);
      const double lo = hi / 2.0;
      double peak = -kInf;
      for (int i = 0; i <= kPeakSamples; ++i) peak = std::max(peak, log_f(side * (lo + (hi - lo) * i / kPeakSamples)));
      ++out.shells;
      if (peak == kInf || std::isnan(peak)) {
        out.log_value = out.value = kInf;
        return out;
      }
      double c = -kInf;
      if (peak > -kInf) {
        const double scaled = integrate([&](double th) { return std::exp(log_f(side * th) - peak); }, lo, hi, 1e-10);
        if (!std::isfinite(scaled)) {
          out.log_value = out.value = kInf;
          return out;
        }
        c = scaled > 0.0 ? peak + std::log(scaled) : -kInf;
      }
      total = log_add(total, c);
      // Quiet only when even peak * width is negligible; the adaptive rule can
      // miss a spike at the inner end of a shell.
      quiet = peak + std::log(hi - lo) <= total + quiet_level ? quiet + 1 : 0;
      done = quiet >= kQuietShells;
    }
    if (!done) {
      out.log_value = out.value = kInf;
      return out;
    }
  }
  out.log_value = total;
  out.value = std::exp(total);
  out.finite = true;
  return out;
}

UValue u_functional(double n, const LatticeField& u0, const LatticeField& u1, const SpeedProfile& profile) {
  if (u0.dim() != 1 || u1.dim() != 1) throw std::invalid_argument("u_functional supports d = 1");
  const double a_start = profile.a(0.0);
  const LogSpectrum ls = [&](double theta) {
    const std::span<const double> th(&theta, 1);
    const double xi = 2.0 * std::sin(theta / 2.0);
    const double e = std::norm(dtft(u1, th)) + a_start * a_start * xi * xi * std::norm(dtft(u0, th));
    return e > 0.0 ? std::log(e) : -kInf;
  };
  return u_functional(n, ls, profile);
}

MomentResult moment_check(const LatticeField& v, int max_order) {
  if (max_order < 0) throw std::invalid_argument("moment order must be >= 0");
  const int d = v.dim();
  MomentResult out;
  for (int order = 0; order <= max_order; ++order) {
    // All alpha with |alpha| = order over the first d axes, lexicographic.
    std::array<int, kMaxDim> alpha{};
    const auto visit = [&](const std::array<int, kMaxDim>& a) {
      Complex moment{};
      double scale = 0.0;
      for (const auto& [k, val] : v.entries()) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
          w *= std::pow(static_cast<double>(k[static_cast<std::size_t>(j)]), a[static_cast<std::size_t>(j)]);
        }
        moment += w * val;
        scale += std::abs(w) * std::abs(val);
      }
      if (std::abs(moment) <= 1e-9 * scale) return false;
      out.pass = false;
      out.alpha = a;
      out.moment = std::abs(moment);
      out.scale = scale;
      return true;
    };
    if (d == 1) {
      alpha[0] = order;
      if (visit(alpha)) return out;
    } else if (d == 2) {
      for (int a0 = order; a0 >= 0; --a0) {
        alpha = {a0, order - a0, 0};
        if (visit(alpha)) return out;
      }
    } else {
      for (int a0 = order; a0 >= 0; --a0) {
        for (int a1 = order - a0; a1 >= 0; --a1) {
          alpha = {a0, a1, order - a0 - a1};
          if (visit(alpha)) return out;
        }
      }
    }
  }
  return out;
}

DecayResult decay_check(const LatticeField& v, const LogConvexSequence& seq, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("decay check needs rho > 0");
  const int d = v.dim();
  struct Term {
    double norm;
    double log_value;
  };
  std::vector<Term> terms;
  for (const auto& [k, val] : v.entries()) {
    if (val == Complex{}) continue;
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += static_cast<double>(k[static_cast<std::size_t>(j)] * k[static_cast<std::size_t>(j)]);
    if (s == 0.0) continue;
    const double kn = std::sqrt(s);
    const auto t = associated_function(seq, kn / rho);
    if (t.infinite) {
      return {false, kInf, kInf, fmt::format("T[M_j]({:.6g}) is infinite", kn / rho)};
    }
    terms.push_back({kn, std::log(std::abs(val)) + (d + 1) * std::log(kn) + t.log_value});
  }
  DecayResult out;
  if (terms.empty()) {
    out.pass = true;
    out.log_constant = -kInf;
    return out;
  }
  double radius = 0.0;
  for (const auto& t : terms) radius = std::max(radius, t.norm);
  double sup_outer = -kInf;
  double sup_inner = -kInf;
  for (const auto& t : terms) {
    double& bucket = t.norm >= 0.75 * radius ? sup_outer : sup_inner;
    bucket = std::max(bucket, t.log_value);
  }
  out.log_constant = std::max(sup_outer, sup_inner);
  out.constant = std::exp(out.log_constant);
  out.pass = sup_inner == -kInf || sup_outer <= sup_inner + kGrowthSlack;
  if (!out.pass) out.note = "weighted entries grow on the outer quarter of the support";
  return out;
}

namespace {

GevreyData build_from(const std::function<double(double)>& g, int truncation) {
  if (truncation < 16) throw std::invalid_argument("Gevrey data truncation must be >= 16");
  // Nodes theta_j = -pi + 2 pi j / n; cos(k theta_j) = (-1)^k cos(2 pi (k j mod n) / n)
  // from one table, so every coefficient sees the same rounded cosines.
  const auto coefficients = [&](int n) {
    std::vector<double> table(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) table[static_cast<std::size_t>(i)] = std::cos(2.0 * std::numbers::pi * i / n);
    std::vector<double> gv(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) gv[static_cast<std::size_t>(j)] = g(-std::numbers::pi + 2.0 * std::numbers::pi * j / n);
    std::vector<double> c(static_cast<std::size_t>(truncation) + 1, 0.0);
    for (int k = 0; k <= truncation; ++k) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const auto idx = static_cast<std::size_t>((static_cast<long long>(k) * j) % n);
        sum += gv[static_cast<std::size_t>(j)] * table[idx];
      }
      c[static_cast<std::size_t>(k)] = (k % 2 == 0 ? sum : -sum) / n;
    }
    return c;
  };
  const int n = std::max(8192, 16 * truncation);
  const auto c1 = coefficients(n);
  const auto c2 = coefficients(2 * n);
  for (std::size_t k = 0; k < c1.size(); ++k) {
    if (std::abs(c1[k] - c2[k]) > 1e-13) {
      throw NumericalError(fmt::format("Gevrey data quadrature did not converge at k = {}", k));
    }
  }
  GevreyData data;
  data.truncation = truncation;
  for (int k = -truncation; k <= truncation; ++k) {
    const double x = c2[static_cast<std::size_t>(std::abs(k))];
    if (std::abs(x) >= 1e-16) data.field.set({k, 0, 0}, x);
  }
  return data;
}

}  // namespace

GevreyData build_gevrey_data(const Example36Data& kind, int truncation) {
  if (!(kind.m0 > 0.0)) throw std::invalid_argument("example36 data needs M0 > 0");
  const double m0 = kind.m0;
  GevreyData data = build_from([m0](double th) { return std::pow(std::abs(std::sin(th / 2.0)), m0); }, truncation);
  data.m0 = m0;
  data.log_spectrum = [m0](double th) {
    const double s = std::abs(std::sin(th / 2.0));
    return s == 0.0 ? -kInf : 2.0 * m0 * std::log(s);
  };
  return data;
}

GevreyData build_gevrey_data(const Example37Data& kind, int truncation) {
  if (!(kind.rho > 0.0) || !(kind.kappa > 0.0)) throw std::invalid_argument("example37 data needs rho, kappa > 0");
  const double rho = kind.rho;
  const double kappa = kind.kappa;
  GevreyData data = build_from(
      [rho, kappa](double th) {
        const double s = std::abs(std::sin(th / 2.0));
        return s == 0.0 ? 0.0 : std::exp(-rho * std::pow(s, -kappa));
      },
      truncation);
  data.rho = rho;
  data.kappa = kappa;
  data.log_spectrum = [rho, kappa](double th) {
    const double xi = 2.0 * std::abs(std::sin(th / 2.0));
    return xi == 0.0 ? -kInf : -std::pow(2.0, kappa + 1.0) * rho * std::pow(xi, -kappa);
  };
  return data;
}

DecayBoundCheck fourier_decay_bound(const LatticeField& v, const LogConvexSequence& seq, double rho,
                                    const TorusGrid& grid) {
  if (v.dim() != grid.dim()) throw std::invalid_argument("field and grid dimensions differ");
  const int d = grid.dim();
  std::vector<std::pair<double, double>> pts;  // (|theta|, log bound)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const FrequencyPoint p = grid.point(i);
    double s = 0.0;
    for (double th : p.theta()) s += th * th;
    if (s == 0.0) continue;
    const double r = std::sqrt(s);
    const double lv = std::log(std::abs(dtft(v, p.theta())));
    const auto t = associated_function(seq, 1.0 / (d * rho * r), AssociatedMode::factorial_divided);
    pts.emplace_back(r, t.infinite ? kInf : lv + t.log_value);
  }
  std::sort(pts.begin(), pts.end());
  DecayBoundCheck out;
  out.log_constant = -kInf;
  const std::size_t inner = pts.size() / 4;
  double sup_inner = -kInf;
  double sup_rest = -kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].second > out.log_constant) {
      out.log_constant = pts[i].second;
      out.worst_theta = pts[i].first;
    }
    double& bucket = i < inner ? sup_inner : sup_rest;
    bucket = std::max(bucket, pts[i].second);
  }
  out.holds = out.log_constant < kInf && sup_inner <= sup_rest + kGrowthSlack;
  return out;
}

std::string to_string(GateVerdict v) {
  switch (v) {
    case GateVerdict::case_i: return "case-i";
    case GateVerdict::case_ii: return "case-ii";
    case GateVerdict::neither: return "neither";
  }
  return "?";
}

double gate_inner_infimum(double n, const SpeedProfile& profile, int dim) {
  if (!(n > 0.0)) throw std::invalid_argument("gate needs N > 0");
  const double tau0 = 1.0 / (2.0 * std::sqrt(static_cast<double>(dim)));
  constexpr int kPoints = 1500;
  const double span = std::log(1e12 / tau0);
  double best = kInf;
  for (int i = 0; i <= kPoints; ++i) {
    const double tau = tau0 * std::exp(span * i / kPoints);
    const double r = theta_of_lambda_inverse(profile, n * tau) / (n * theta_of_lambda_inverse(profile, tau));
    best = std::min(best, r);
  }
  return best;
}

GateResult theorem3_gate(const std::vector<double>& n_grid, const LogConvexSequence& seq,
                         const SpeedProfile& profile, double threshold, int dim) {
  if (n_grid.size() < 2) throw std::invalid_argument("gate needs at least two N values");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw std::invalid_argument("gate N grid must be sorted");
  GateResult g;
  g.n_grid = n_grid;
  bool all_positive = true;
  for (double n : n_grid) {
    g.l_values.push_back(L_constant(n, seq, profile));
    all_positive = all_positive && g.l_values.back().positive;
    g.inner.push_back(gate_inner_infimum(n, profile, dim));
  }
  // Least-squares slope of log inner against log N.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double cnt = static_cast<double>(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double x = std::log(n_grid[i]);
    const double y = std::log(g.inner[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  g.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (g.inner[i] >= threshold) {
      g.n0 = n_grid[i];
      break;
    }
  }
  const bool diverges = g.slope > 0.1 && g.inner.back() >= threshold;
  g.verdict = all_positive ? GateVerdict::case_i : diverges ? GateVerdict::case_ii : GateVerdict::neither;
  return g;
}

CsvTable GateResult::to_csv() const {
  CsvTable t({"N", "value", "log_value", "converged", "inner"});
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    t.row().add(n_grid[i]).add(l_values[i].value).add(l_values[i].log_value).add(l_values[i].converged).add(inner[i]);
  }
  return t;
}

CsvTable gevrey_data_csv(const GevreyData& data) {
  CsvTable t({"k", "re", "im"});
  for (const auto& [k, v] : data.field.entries()) {
    t.row().add(static_cast<long long>(k[0])).add(v.real()).add(v.imag());
  }
  return t;
}

}  // namespace sdwave
