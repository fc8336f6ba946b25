#pragma once

// Independent reconstructions used by the diagonalization tests and the
// acceptance run: a generic 2x2 eigen-decomposition and Richardson
// differences in t, with no use of the closed-form delta/lambda formulas.

#include <sdwave/diagonalization.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace sdwave::test {

/// Eigenvector matrix [[1, x], [y, 1]] of a 2x2 matrix from its
/// characteristic polynomial; the first column belongs to the eigenvalue
/// nearest a[0][0].
inline Matrix2 eigenvector_matrix(const Matrix2& a) {
  const Complex half_tr = 0.5 * (a[0][0] + a[1][1]);
  const Complex det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  const Complex disc = std::sqrt(half_tr * half_tr - det);
  Complex l1 = half_tr + disc;
  Complex l2 = half_tr - disc;
  if (std::abs(l2 - a[0][0]) < std::abs(l1 - a[0][0])) std::swap(l1, l2);
  // Second-row and first-row relations respectively: l1 - a00 cancels when the
  // off-diagonal is small, l1 - a11 does not.
  const Complex y = a[1][0] / (l1 - a[1][1]);
  const Complex x = a[0][1] / (l2 - a[0][0]);
  return {{{Complex(1.0), x}, {y, Complex(1.0)}}};
}

/// Smallest and largest eigenvalue of P^H P.
inline std::pair<double, double> squared_singular_values(const Matrix2& p) {
  const double a = std::norm(p[0][0]) + std::norm(p[1][0]);
  const double d = std::norm(p[0][1]) + std::norm(p[1][1]);
  const Complex b = std::conj(p[0][0]) * p[0][1] + std::conj(p[1][0]) * p[1][1];
  const double mid = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mid - rad, mid + rad};
}

struct ChainAlgebraStats {
  int points = 0;
  double max_error = 0.0;        // max over points/levels of |A_{k+1} - reconstruction| / max(1, |A_{k+1}|)
  int norm_violations = 0;
  double min_margin_lo = 1e300;  // min of sigma_min^2 / c_lo
  double min_margin_hi = 1e300;  // min of c_hi / sigma_max^2
};

/// Random (t, |xi|) in the hyperbolic zone of the partition, t <= t_max. For
/// each point and level k the chain's A_{k+1} is compared with M^{-1} A_k M - M^{-1} dM/dt, where M comes from
/// eigenvector_matrix and dM/dt from a Richardson central difference.
inline ChainAlgebraStats check_chain_algebra(const SpeedProfile& profile, const ZonePartition& part, int m, int count,
                                             double t_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto [c_lo, c_hi] = chain_norm_constants(m);
  ChainAlgebraStats stats;
  while (stats.points < count) {
    const double xi = std::exp(std::log(1e-2) + u(rng) * std::log(2.0 / 1e-2));
    const double txi = zone_boundary(part, xi);
    if (!(txi < t_max)) continue;
    const double lo = std::max(txi, 1e-3);
    const double t = std::exp(std::log(lo) + u(rng) * std::log(t_max / lo));
    ++stats.points;

    const auto jets = chain_jets(profile, xi, t, m);
    const double h = 1e-3 * profile.step_hint(t);
    for (int k = 1; k < m; ++k) {
      auto m_at = [&](double s) {
        return eigenvector_matrix(chain_jets(profile, xi, s, m)[static_cast<std::size_t>(k - 1)].at_point().matrix());
      };
      const Matrix2 mk = m_at(t);
      const Matrix2 p1 = m_at(t + h), m1 = m_at(t - h), p2 = m_at(t + h / 2), m2 = m_at(t - h / 2);
      Matrix2 dm{};
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const Complex dh = (p1[i][j] - m1[i][j]) / (2.0 * h);
          const Complex dh2 = (p2[i][j] - m2[i][j]) / h;
          dm[i][j] = (4.0 * dh2 - dh) / 3.0;
        }
      }
      const Matrix2 inv = inverse(mk);
      const Matrix2 ak = jets[static_cast<std::size_t>(k - 1)].at_point().matrix();
      const Matrix2 left = inv * ak * mk;
      const Matrix2 right = inv * dm;
      const Matrix2 next = jets[static_cast<std::size_t>(k)].at_point().matrix();
      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) err = std::max(err, std::abs(left[i][j] - right[i][j] - next[i][j]));
      }
      stats.max_error = std::max(stats.max_error, err / std::max(1.0, max_abs_entry(next)));
    }

    const DiagChain chain = build_chain(profile, xi, t, m);
    const auto [smin, smax] = squared_singular_values(chain.product());
    stats.min_margin_lo = std::min(stats.min_margin_lo, smin / c_lo);
    stats.min_margin_hi = std::min(stats.min_margin_hi, c_hi / smax);
    if (smin < c_lo || smax > c_hi) ++stats.norm_violations;
  }
  return stats;
}

}  // namespace sdwave::test
