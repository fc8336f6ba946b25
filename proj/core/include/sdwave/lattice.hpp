#pragma once

// Finitely supported fields on Z^d, forward/backward differences, the
// discrete-time Fourier transform and the frequency map theta -> xi(theta).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace sdwave {

inline constexpr int kMaxDim = 3;

using Complex = std::complex<double>;

/// Lattice index k in Z^d; components beyond the field dimension are zero.
using LatticeIndex = std::array<std::int64_t, kMaxDim>;

enum class Direction { forward, backward };

/// Sparse complex field on Z^d (1 <= d <= 3). Indices that are not stored
/// read as exactly zero.
class LatticeField {
 public:
  explicit LatticeField(int dim);

  static LatticeField delta(int dim, const LatticeIndex& at = {}, Complex value = 1.0);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  [[nodiscard]] Complex at(const LatticeIndex& k) const;
  void set(const LatticeIndex& k, Complex value);
  void add(const LatticeIndex& k, Complex value);

  /// Ordered (lexicographic) view of the stored entries.
  [[nodiscard]] const std::map<LatticeIndex, Complex>& entries() const noexcept { return values_; }

  /// Largest |k_j| over the support, 0 for an empty field.
  [[nodiscard]] std::int64_t support_radius() const;

  friend bool operator==(const LatticeField&, const LatticeField&) = default;

 private:
  void check_index(const LatticeIndex& k) const;

  int dim_;
  std::map<LatticeIndex, Complex> values_;
};

/// D_j^+ f[k] = f[k+e_j] - f[k], D_j^- f[k] = f[k] - f[k-e_j]; axis is 0-based.
LatticeField difference(const LatticeField& f, int axis, Direction dir);

/// sum_j D_j^+ D_j^- f, i.e. the 2d+1 point second-difference stencil.
LatticeField discrete_laplacian(const LatticeField& f);

LatticeField operator+(const LatticeField& a, const LatticeField& b);
LatticeField operator-(const LatticeField& a, const LatticeField& b);
LatticeField operator*(Complex s, const LatticeField& a);

/// sum_k exp(-i k.theta) f[k]; theta.size() must equal f.dim().
Complex dtft(const LatticeField& f, std::span<const double> theta);

double l2_norm_squared(const LatticeField& f);

/// A point of the torus [-pi, pi]^d. xi(theta)_j = 2 sin(theta_j / 2) is
/// derived on demand from theta and never stored.
class FrequencyPoint {
 public:
  FrequencyPoint() = default;
  explicit FrequencyPoint(std::span<const double> theta);

  /// Point with a single nonzero |xi| along the first axis, for mode-level work.
  static FrequencyPoint from_xi_norm(double xi_norm, int dim = 1);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const double> theta() const noexcept {
    return {theta_.data(), static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] std::array<double, kMaxDim> xi() const;
  [[nodiscard]] double xi_norm() const;

 private:
  std::array<double, kMaxDim> theta_{};
  int dim_ = 1;
};

/// Validating constructor: every component must lie in [-pi, pi].
FrequencyPoint xi_of_theta(std::span<const double> theta);

/// Uniform n^d grid on the torus with nodes theta_j = -pi + 2 pi j / n. The
/// periodic trapezoidal rule on this grid integrates trigonometric
/// polynomials of degree < n exactly.
class TorusGrid {
 public:
  TorusGrid(int dim, int n);

  /// Default resolution: n = 256 for d = 1, 64 for d = 2, 32 for d = 3.
  static TorusGrid with_default_resolution(int dim);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int points_per_axis() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  [[nodiscard]] FrequencyPoint point(std::size_t index) const;

  /// (2 pi)^{-d} * integral over the torus, by the trapezoidal rule.
  [[nodiscard]] double mean(const std::function<double(const FrequencyPoint&)>& f) const;

  /// Same rule applied to precomputed samples in point() order.
  [[nodiscard]] double mean(std::span<const double> samples) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

/// sum_k |u1[k]|^2 + a^2 sum_j sum_k |D_j^+ u0[k]|^2.
double lattice_energy(const LatticeField& u0, const LatticeField& u1, double speed);

}  // namespace sdwave
