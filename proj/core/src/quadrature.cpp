#include "sdwave/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sdwave {

double integrate(const ScalarFunction& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("integrate: limits must be finite");
  }
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rel_tol, &error);
}

double integrate_pieces(const ScalarFunction& f, double a, double b,
                        std::span<const double> breakpoints,
                        const ScalarFunction& max_piece, double rel_tol) {
  if (b < a) return -integrate_pieces(f, b, a, breakpoints, max_piece, rel_tol);
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(b);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i];
    const double hi = cuts[i + 1];
    while (lo < hi) {
      const double piece = std::max(max_piece(lo), 1e-9 * (1.0 + std::abs(lo)));
      const double next = (hi - lo <= piece * 1.5) ? hi : lo + piece;
      total += integrate(f, lo, next, rel_tol);
      lo = next;
    }
  }
  return total;
}

}  // namespace sdwave
