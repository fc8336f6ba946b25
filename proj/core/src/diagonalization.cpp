#include "sdwave/diagonalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sdwave/errors.hpp"
#include "sdwave/hypotheses.hpp"

namespace sdwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Complex kI{0.0, 1.0};

}  // namespace

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 r{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return r;
}

Vector2 operator*(const Matrix2& a, const Vector2& v) {
  return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

Matrix2 inverse(const Matrix2& a) {
  const Complex det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (det == Complex{}) throw NumericalError("singular 2x2 matrix");
  return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

double max_abs_entry(const Matrix2& a) {
  double m = 0.0;
  for (const auto& row : a) {
    for (const auto& x : row) m = std::max(m, std::abs(x));
  }
  return m;
}

double norm_squared(const Vector2& v) { return std::norm(v[0]) + std::norm(v[1]); }

Matrix2 ConjugateSystem::matrix() const { return {{{phi, std::conj(r)}, {r, std::conj(phi)}}}; }

FirstOrderSystem first_order_system(const SpeedProfile& profile, double xi_norm, const ModeState& state) {
  if (!(xi_norm > 0.0)) throw std::invalid_argument("first-order system needs |xi| > 0");
  const RealJet a = profile.jet(state.t, 1);
  const double ax = a.value() * xi_norm;
  const double ratio = a.derivative(1) / (2.0 * a.value());
  FirstOrderSystem s;
  s.v1 = {state.vt + kI * ax * state.v, state.vt - kI * ax * state.v};
  s.a1 = {Complex{ratio, ax}, Complex{-ratio, 0.0}, 1, profile.m() - 1};
  return s;
}

ConjugateJets first_order_jets(const SpeedProfile& profile, double xi_norm, double t, int m) {
  if (!(xi_norm > 0.0)) throw std::invalid_argument("first-order system needs |xi| > 0");
  if (m < 1) throw std::invalid_argument("chain length m must be at least 1");
  const RealJet a = profile.jet(t, m);
  const RealJet ratio = a.differentiated() / (2.0 * a.truncated(m - 1));
  const RealJet ax = a.truncated(m - 1) * xi_norm;
  return {make_complex(ratio, ax), to_complex(-ratio), 1};
}

DiagStep diag_step(const ConjugateJets& a) {
  const int order = a.phi.order();
  if (order < 1 || a.r.order() < 1) throw std::out_of_range("diagonalization step needs one more derivative");
  const RealJet re = real_part(a.phi);
  const RealJet im = imag_part(a.phi);
  if (!(im.value() > 0.0)) throw NumericalError("phi_Im must be positive");
  const RealJet x = abs2(a.r) / (im * im);
  if (!(x.value() < 1.0)) throw NumericalError("eigenvalue radicand is not positive");
  const RealJet s = sqrt(1.0 - x);
  const ComplexJet lambda = make_complex(re, im * s);
  // Smooth form of (lambda - phi) / conj(r): no division by r.
  const ComplexJet delta = (-kI) * a.r / to_complex(im * (s + 1.0));
  const ComplexJet ddelta = delta.differentiated();
  const ComplexJet denom = to_complex(1.0 - abs2(delta).truncated(order - 1));
  const ComplexJet r_next = -ddelta / denom;
  const ComplexJet phi_next = lambda.truncated(order - 1) + conj(delta).truncated(order - 1) * ddelta / denom;

  DiagStep st;
  st.lambda = lambda.value();
  st.delta = delta.value();
  st.m = {{{1.0, std::conj(st.delta)}, {st.delta, 1.0}}};
  st.next = {phi_next, r_next, a.level + 1};
  st.radicand_ratio = x.value();
  st.correction_ratio = (std::conj(st.delta) * r_next.value()).imag() / im.value();
  const Matrix2 lhs = a.at_point().matrix() * st.m;
  const Matrix2 rhs = st.m * Matrix2{{{st.lambda, 0.0}, {0.0, std::conj(st.lambda)}}};
  Matrix2 diff{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) diff[i][j] = lhs[i][j] - rhs[i][j];
  }
  st.eigen_residual = max_abs_entry(diff);
  return st;
}

DiagStep diag_step(const ConjugateSystem& a) {
  const int order = std::max(1, std::min(a.deriv_budget, kMaxJetOrder));
  return diag_step(ConjugateJets{ComplexJet(order, a.phi), ComplexJet(order, a.r), a.level});
}

Matrix2 DiagChain::product() const {
  Matrix2 p{{{1.0, 0.0}, {0.0, 1.0}}};
  for (const auto& l : levels) p = p * l.m;
  return p;
}

double DiagChain::log_delta_weight() const {
  double s = 0.0;
  for (const auto& l : levels) s += std::log1p(-std::norm(l.delta));
  return s;
}

std::vector<ConjugateJets> chain_jets(const SpeedProfile& profile, double xi_norm, double t, int m) {
  std::vector<ConjugateJets> out;
  out.push_back(first_order_jets(profile, xi_norm, t, m));
  for (int k = 1; k < m; ++k) out.push_back(diag_step(out.back()).next);
  return out;
}

DiagChain build_chain(const SpeedProfile& profile, double xi_norm, double t, int m) {
  DiagChain c;
  c.t = t;
  c.xi_norm = xi_norm;
  ConjugateJets cur = first_order_jets(profile, xi_norm, t, m);
  for (int k = 1; k < m; ++k) {
    DiagStep st = diag_step(cur);
    c.levels.push_back({cur.at_point(), st.lambda, st.delta, st.m, st.radicand_ratio, st.correction_ratio,
                        st.eigen_residual});
    cur = std::move(st.next);
  }
  c.final_system = cur.at_point();
  return c;
}

std::pair<double, double> chain_norm_constants(int m) {
  const double lo = (3.0 - 2.0 * std::numbers::sqrt2) / 2.0;
  const double hi = (3.0 + 2.0 * std::numbers::sqrt2) / 2.0;
  return {std::pow(lo, m - 1), std::pow(hi, m - 1)};
}

ZonePartition make_zone_partition(const PowerLog& control, double n, int dim, ZoneFlavor flavor) {
  if (!(n > 0.0)) throw std::invalid_argument("zone constant N must be positive");
  ZonePartition p;
  p.n = n;
  p.flavor = flavor;
  p.control = control;
  p.dim = dim;
  const double level = n / (2.0 * std::sqrt(static_cast<double>(dim)));
  const double t0 = control(0.0) > level ? 0.0 : control.inverse(level);
  p.t0 = std::isfinite(t0) ? t0 : 0.0;
  return p;
}

double zone_boundary(const ZonePartition& partition, double xi_norm) {
  if (!(xi_norm > 0.0)) return kInf;
  const double s = partition.n / xi_norm;
  if (partition.control(partition.t0) >= s) return partition.t0;
  if (!partition.control.is_unbounded() && partition.control.limit() <= s) return kInf;
  return std::max(partition.t0, partition.control.inverse(s));
}

SymbolFit verify_symbol_class(const SymbolFunction& f, int p, int q, int r, const SpeedProfile& profile,
                              const std::vector<SymbolSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("symbol-class check needs samples");
  double t_max = 0.0;
  for (const auto& s : samples) t_max = std::max(t_max, s.t);
  SymbolFit fit;
  double sup_before = 0.0;
  double sup_tail = 0.0;
  bool finite = true;
  for (const auto& s : samples) {
    const ComplexJet j = f(s.t, s.xi_norm, p);
    if (j.order() < p) throw std::out_of_range("symbol function returned too few derivatives");
    const double xi_t = profile.xi()(s.t);
    for (int k = 0; k <= p; ++k) {
      const double v = std::abs(j.derivative(k)) * std::pow(s.xi_norm, -q) * std::pow(xi_t, r + k);
      if (!std::isfinite(v)) finite = false;
      if (v > fit.constant) fit = {false, v, s.t, s.xi_norm, k};
      double& bucket = s.t >= t_max / 10.0 ? sup_tail : sup_before;
      bucket = std::max(bucket, v);
    }
  }
  fit.holds = finite && sup_tail <= (1.0 + kTailSlack) * sup_before;
  return fit;
}

SymbolFunction chain_entry(const SpeedProfile& profile, int m, int level, ChainEntry entry) {
  if (level < 1 || level > m) throw std::out_of_range("chain level out of range");
  if (entry == ChainEntry::delta && level == m) throw std::out_of_range("delta_m is not defined");
  return [&profile, m, level, entry](double t, double xi_norm, int order) {
    const auto jets = chain_jets(profile, xi_norm, t, m);
    const ConjugateJets& a = jets[static_cast<std::size_t>(level - 1)];
    ComplexJet out;
    switch (entry) {
      case ChainEntry::r: out = a.r; break;
      case ChainEntry::phi_im: out = to_complex(imag_part(a.phi)); break;
      case ChainEntry::delta: {
        const RealJet im = imag_part(a.phi);
        const RealJet s = sqrt(1.0 - abs2(a.r) / (im * im));
        out = (-kI) * a.r / to_complex(im * (s + 1.0));
        break;
      }
    }
    if (out.order() < order) throw std::out_of_range("chain entry has fewer derivatives than requested");
    return out.truncated(order);
  };
}

double mu(const SpeedProfile& profile, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("mu needs r > 0");
  return r * profile.theta()(lambda_inverse(profile, 1.0 / r));
}

}  // namespace sdwave
