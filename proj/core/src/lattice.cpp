#include "sdwave/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdwave {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("lattice dimension must lie in [1, 3], got " + std::to_string(dim));
  }
}

}  // namespace

LatticeField::LatticeField(int dim) : dim_(dim) { check_dim(dim); }

LatticeField LatticeField::delta(int dim, const LatticeIndex& at, Complex value) {
  LatticeField f(dim);
  f.set(at, value);
  return f;
}

void LatticeField::check_index(const LatticeIndex& k) const {
  for (int j = dim_; j < kMaxDim; ++j) {
    if (k[static_cast<std::size_t>(j)] != 0) {
      throw std::invalid_argument("lattice index has nonzero component beyond field dimension");
    }
  }
}

Complex LatticeField::at(const LatticeIndex& k) const {
  auto it = values_.find(k);
  return it == values_.end() ? Complex{} : it->second;
}

void LatticeField::set(const LatticeIndex& k, Complex value) {
  check_index(k);
  values_[k] = value;
}

void LatticeField::add(const LatticeIndex& k, Complex value) {
  check_index(k);
  values_[k] += value;
}

std::int64_t LatticeField::support_radius() const {
  std::int64_t r = 0;
  for (const auto& [k, v] : values_) {
    for (int j = 0; j < dim_; ++j) r = std::max(r, std::abs(k[static_cast<std::size_t>(j)]));
  }
  return r;
}

LatticeField difference(const LatticeField& f, int axis, Direction dir) {
  if (axis < 0 || axis >= f.dim()) {
    throw std::out_of_range("difference axis " + std::to_string(axis) + " out of range for dim " +
                            std::to_string(f.dim()));
  }
  const auto j = static_cast<std::size_t>(axis);
  LatticeField out(f.dim());
  for (const auto& [k, v] : f.entries()) {
    // f[k] contributes +v at k - e_j and -v at k (forward),
    // +v at k and -v at k + e_j (backward).
    LatticeIndex shifted = k;
    if (dir == Direction::forward) {
      shifted[j] -= 1;
      out.add(shifted, v);
      out.add(k, -v);
    } else {
      shifted[j] += 1;
      out.add(k, v);
      out.add(shifted, -v);
    }
  }
  return out;
}

LatticeField discrete_laplacian(const LatticeField& f) {
  LatticeField out(f.dim());
  for (int j = 0; j < f.dim(); ++j) {
    out = out + difference(difference(f, j, Direction::backward), j, Direction::forward);
  }
  return out;
}

LatticeField operator+(const LatticeField& a, const LatticeField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("field dimensions differ");
  LatticeField out = a;
  for (const auto& [k, v] : b.entries()) out.add(k, v);
  return out;
}

LatticeField operator-(const LatticeField& a, const LatticeField& b) {
  return a + Complex{-1.0} * b;
}

LatticeField operator*(Complex s, const LatticeField& a) {
  LatticeField out(a.dim());
  for (const auto& [k, v] : a.entries()) out.set(k, s * v);
  return out;
}

Complex dtft(const LatticeField& f, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != f.dim()) {
    throw std::invalid_argument("theta dimension does not match field dimension");
  }
  Complex sum{};
  for (const auto& [k, v] : f.entries()) {
    double phase = 0.0;
    for (int j = 0; j < f.dim(); ++j) {
      phase += static_cast<double>(k[static_cast<std::size_t>(j)]) * theta[static_cast<std::size_t>(j)];
    }
    sum += std::polar(1.0, -phase) * v;
  }
  return sum;
}

double l2_norm_squared(const LatticeField& f) {
  double s = 0.0;
  for (const auto& [k, v] : f.entries()) s += std::norm(v);
  return s;
}

FrequencyPoint::FrequencyPoint(std::span<const double> theta) : dim_(static_cast<int>(theta.size())) {
  check_dim(dim_);
  for (int j = 0; j < dim_; ++j) theta_[static_cast<std::size_t>(j)] = theta[static_cast<std::size_t>(j)];
}

FrequencyPoint FrequencyPoint::from_xi_norm(double xi_norm, int dim) {
  if (xi_norm < 0.0 || xi_norm > 2.0) {
    throw std::out_of_range("single-axis |xi| must lie in [0, 2]");
  }
  std::array<double, kMaxDim> theta{};
  theta[0] = 2.0 * std::asin(xi_norm / 2.0);
  return FrequencyPoint(std::span<const double>(theta.data(), static_cast<std::size_t>(dim)));
}

std::array<double, kMaxDim> FrequencyPoint::xi() const {
  std::array<double, kMaxDim> x{};
  for (int j = 0; j < dim_; ++j) {
    x[static_cast<std::size_t>(j)] = 2.0 * std::sin(theta_[static_cast<std::size_t>(j)] / 2.0);
  }
  return x;
}

double FrequencyPoint::xi_norm() const {
  const auto x = xi();
  double s = 0.0;
  for (int j = 0; j < dim_; ++j) s += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
  return std::sqrt(s);
}

FrequencyPoint xi_of_theta(std::span<const double> theta) {
  for (double t : theta) {
    if (!(t >= -std::numbers::pi && t <= std::numbers::pi)) {
      throw std::out_of_range("theta component outside [-pi, pi]");
    }
  }
  return FrequencyPoint(theta);
}

TorusGrid::TorusGrid(int dim, int n) : dim_(dim), n_(n), size_(1) {
  check_dim(dim);
  if (n < 1) throw std::invalid_argument("torus grid needs at least one point per axis");
  for (int j = 0; j < dim; ++j) size_ *= static_cast<std::size_t>(n);
}

TorusGrid TorusGrid::with_default_resolution(int dim) {
  check_dim(dim);
  constexpr std::array<int, kMaxDim> kDefault = {256, 64, 32};
  return TorusGrid(dim, kDefault[static_cast<std::size_t>(dim - 1)]);
}

FrequencyPoint TorusGrid::point(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("torus grid index out of range");
  std::array<double, kMaxDim> theta{};
  for (int j = 0; j < dim_; ++j) {
    const auto digit = index % static_cast<std::size_t>(n_);
    index /= static_cast<std::size_t>(n_);
    theta[static_cast<std::size_t>(j)] =
        -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(digit) / n_;
  }
  return FrequencyPoint(std::span<const double>(theta.data(), static_cast<std::size_t>(dim_)));
}

double TorusGrid::mean(const std::function<double(const FrequencyPoint&)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size_; ++i) s += f(point(i));
  return s / static_cast<double>(size_);
}

double TorusGrid::mean(std::span<const double> samples) const {
  if (samples.size() != size_) throw std::invalid_argument("sample count does not match torus grid");
  double s = 0.0;
  for (double v : samples) s += v;
  return s / static_cast<double>(size_);
}

double lattice_energy(const LatticeField& u0, const LatticeField& u1, double speed) {
  if (u0.dim() != u1.dim()) throw std::invalid_argument("field dimensions differ");
  double e = l2_norm_squared(u1);
  for (int j = 0; j < u0.dim(); ++j) {
    e += speed * speed * l2_norm_squared(difference(u0, j, Direction::forward));
  }
  return e;
}

}  // namespace sdwave
