#pragma once

// Thin wrappers over Boost.Math Gauss-Kronrod quadrature.

#include <functional>
#include <span>

namespace sdwave {

using ScalarFunction = std::function<double(double)>;

/// Adaptive 31-point Gauss-Kronrod on [a, b].
double integrate(const ScalarFunction& f, double a, double b, double rel_tol = 1e-11);

/// Integrates over [a, b] after splitting at the given breakpoints and into
/// pieces no longer than max_piece(t), evaluated at the left end of each piece.
/// Splitting keeps the adaptive rule away from kinks and long oscillatory runs.
double integrate_pieces(const ScalarFunction& f, double a, double b,
                        std::span<const double> breakpoints,
                        const ScalarFunction& max_piece, double rel_tol = 1e-11);

}  // namespace sdwave
