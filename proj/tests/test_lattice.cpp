#include <doctest.h>

#include <sdwave/lattice.hpp>
#include <sdwave/spectral_solver.hpp>

#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace sdwave;
using sdwave::test::abs_sum;
using sdwave::test::brute_dtft;
using sdwave::test::random_field;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("forward and backward differences on a delta") {
  const LatticeField d = LatticeField::delta(1);
  const LatticeField fwd = difference(d, 0, Direction::forward);
  CHECK(fwd.at({-1}) == Complex(1.0));
  CHECK(fwd.at({0}) == Complex(-1.0));
  const LatticeField bwd = difference(d, 0, Direction::backward);
  CHECK(bwd.at({0}) == Complex(1.0));
  CHECK(bwd.at({1}) == Complex(-1.0));

  const LatticeField lap = discrete_laplacian(d);
  CHECK(lap.at({-1}) == Complex(1.0));
  CHECK(lap.at({0}) == Complex(-2.0));
  CHECK(lap.at({1}) == Complex(1.0));
}

TEST_CASE("laplacian stencil in two dimensions") {
  const LatticeField lap = discrete_laplacian(LatticeField::delta(2, {3, -1}));
  CHECK(lap.at({3, -1}) == Complex(-4.0));
  CHECK(lap.at({2, -1}) == Complex(1.0));
  CHECK(lap.at({4, -1}) == Complex(1.0));
  CHECK(lap.at({3, 0}) == Complex(1.0));
  CHECK(lap.at({3, -2}) == Complex(1.0));
}

TEST_CASE("difference rejects an axis outside the dimension") {
  CHECK_THROWS_AS(difference(LatticeField(2), 2, Direction::forward), std::out_of_range);
  CHECK_THROWS_AS(difference(LatticeField(1), -1, Direction::backward), std::out_of_range);
  CHECK_THROWS_AS(LatticeField(4), std::invalid_argument);
  LatticeField f(1);
  CHECK_THROWS_AS(f.set({0, 1, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("dtft agrees with the written-out sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (int dim = 1; dim <= 3; ++dim) {
    for (int trial = 0; trial < 20; ++trial) {
      const LatticeField f = random_field(rng, dim, -4, 8, 0.7);
      std::array<double, 3> theta{th(rng), th(rng), th(rng)};
      std::span<const double> t(theta.data(), static_cast<std::size_t>(dim));
      CHECK(std::abs(dtft(f, t) - brute_dtft(f, t)) <= 1e-13 * (1.0 + abs_sum(f)));
    }
  }
}

TEST_CASE("differences become multipliers under the transform") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (int dim = 1; dim <= 2; ++dim) {
    for (int trial = 0; trial < 30; ++trial) {
      const LatticeField f = random_field(rng, dim, -6, 12, 0.8);
      std::array<double, 2> theta{th(rng), th(rng)};
      std::span<const double> t(theta.data(), static_cast<std::size_t>(dim));
      const Complex ff = brute_dtft(f, t);
      const double tol = 1e-12 * (1.0 + 4.0 * abs_sum(f));
      double xi2 = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double tj = theta[static_cast<std::size_t>(j)];
        const Complex plus = brute_dtft(difference(f, j, Direction::forward), t);
        const Complex minus = brute_dtft(difference(f, j, Direction::backward), t);
        CHECK(std::abs(plus - (std::polar(1.0, tj) - 1.0) * ff) <= tol);
        CHECK(std::abs(minus - (1.0 - std::polar(1.0, -tj)) * ff) <= tol);
        xi2 += 4.0 * std::sin(tj / 2) * std::sin(tj / 2);
      }
      CHECK(std::abs(brute_dtft(discrete_laplacian(f), t) + xi2 * ff) <= tol);
    }
  }
}

TEST_CASE("frequency map") {
  const double theta[] = {kPi / 3};
  const FrequencyPoint p = xi_of_theta(theta);
  CHECK(p.xi()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.xi_norm() == doctest::Approx(1.0).epsilon(1e-15));

  const double edge[] = {kPi, -kPi};
  CHECK(xi_of_theta(edge).xi_norm() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

  const double outside[] = {kPi + 1e-9};
  CHECK_THROWS_AS(xi_of_theta(outside), std::out_of_range);

  const FrequencyPoint q = FrequencyPoint::from_xi_norm(0.5, 2);
  CHECK(q.dim() == 2);
  CHECK(q.xi_norm() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("trapezoidal rule is exact for low-degree trigonometric polynomials") {
  const TorusGrid g(1, 16);
  CHECK(g.size() == 16u);
  CHECK(g.mean([](const FrequencyPoint& p) { return std::cos(5 * p.theta()[0]) + 2.0; }) ==
        doctest::Approx(2.0).epsilon(1e-15));
  const TorusGrid g2(2, 8);
  CHECK(g2.mean([](const FrequencyPoint& p) { return std::cos(3 * p.theta()[0]) * std::cos(2 * p.theta()[1]); }) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(TorusGrid::with_default_resolution(1).points_per_axis() == 256);
}

TEST_CASE("Parseval on the torus grid") {
  std::mt19937_64 rng(13);
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusGrid grid(dim, 32);
    for (int trial = 0; trial < 10; ++trial) {
      const LatticeField f = random_field(rng, dim, -8, 16, 0.9);
      const double spec = grid.mean([&](const FrequencyPoint& p) { return std::norm(dtft(f, p.theta())); });
      CHECK(spec == doctest::Approx(l2_norm_squared(f)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lattice energy equals the spectral energy") {
  std::mt19937_64 rng(14);
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusGrid grid(dim, 32);
    for (int trial = 0; trial < 5; ++trial) {
      const LatticeField u0 = random_field(rng, dim, -7, 14, 0.9);
      const LatticeField u1 = random_field(rng, dim, -7, 14, 0.9);
      const double speed = 0.5 + trial;
      CHECK(spectral_energy(u0, u1, speed, grid) ==
            doctest::Approx(lattice_energy(u0, u1, speed)).epsilon(1e-12));
    }
  }
}
