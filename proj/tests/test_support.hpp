#pragma once

// Shared helpers for the test executables: seeded random fields and a
// brute-force transform used as an independent oracle.

#include <sdwave/lattice.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <span>

namespace sdwave::test {

/// Field with entries uniform in the unit square on the box [lo, lo + width)^dim.
inline LatticeField random_field(std::mt19937_64& rng, int dim, int lo, int width, double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  LatticeField f(dim);
  const int span = dim >= 2 ? width : 1;
  const int span3 = dim >= 3 ? width : 1;
  for (int i = 0; i < width; ++i) {
    for (int j = 0; j < span; ++j) {
      for (int k = 0; k < span3; ++k) {
        if (keep(rng) > density) continue;
        LatticeIndex idx{lo + i, dim >= 2 ? lo + j : 0, dim >= 3 ? lo + k : 0};
        f.set(idx, Complex(u(rng), u(rng)));
      }
    }
  }
  return f;
}

/// sum_k f[k] (cos(k.theta) - i sin(k.theta)), written out term by term.
inline Complex brute_dtft(const LatticeField& f, std::span<const double> theta) {
  double re = 0.0;
  double im = 0.0;
  for (const auto& [k, v] : f.entries()) {
    double phase = 0.0;
    for (int j = 0; j < f.dim(); ++j) phase += static_cast<double>(k[static_cast<std::size_t>(j)]) * theta[static_cast<std::size_t>(j)];
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    re += v.real() * c + v.imag() * s;
    im += v.imag() * c - v.real() * s;
  }
  return {re, im};
}

inline double abs_sum(const LatticeField& f) {
  double s = 0.0;
  for (const auto& [k, v] : f.entries()) s += std::abs(v);
  return s;
}

}  // namespace sdwave::test
