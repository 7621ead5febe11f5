#include <doctest.h>

#include <cmath>

#include "specmod/minimize.hpp"
#include "specmod/quadrature.hpp"

using namespace specmod;

TEST_CASE("adaptive quadrature reproduces polynomial antiderivatives") {
  auto sq = [](double x) { return x * x; };
  CHECK(integrate(sq, 0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-13));
  CHECK(integrate(sq, 1, 0) == doctest::Approx(-1.0 / 3).epsilon(1e-13));
  CHECK(integrate(sq, 2, 2) == 0.0);

  auto poly = [](double x) { return 3 * x * x - 2 * x + 7; };
  // antiderivative x^3 - x^2 + 7x on [-1, 2]: 18 - (-9)
  CHECK(integrate(poly, -1, 2) == doctest::Approx(27.0).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand converges once panels follow the nodes") {
  auto f = [](double x) { return std::sin(x); };
  std::vector<double> nodes;
  for (int k = 1; k < 10; ++k) nodes.push_back(k * M_PI);
  double v = integrate(f, 0, 10 * M_PI, nodes);
  CHECK(std::abs(v - (1 - std::cos(10 * M_PI))) < 1e-9);
}

TEST_CASE("quadrature reports failure instead of returning junk") {
  QuadratureOptions tight;
  tight.abs_tol = 1e-14;
  tight.rel_tol = 0;
  tight.panel_budget = 8;
  auto wiggly = [](double x) { return std::cos(1e6 * x); };
  CHECK_THROWS_AS(integrate(wiggly, 0, 1, {}, tight), QuadratureFailure);

  auto blowup = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(integrate(blowup, 0, 1), QuadratureFailure);
}

TEST_CASE("grid minimization lands on smooth interior minima") {
  auto parab = [](double x) { return (x - 1.25) * (x - 1.25); };
  ScanExtremum m = grid_min(parab, 0, 3, 64);
  CHECK(std::abs(m.x - 1.25) < 1e-8);
  CHECK(m.value < 1e-15);

  // several local minima: the global one (at 3pi/2 for sin + slope) wins
  auto multi = [](double x) { return std::sin(x) + 0.01 * x; };
  ScanExtremum g = grid_min(multi, 0, 20, 256);
  double best = g.value;
  for (int i = 0; i <= 2000; ++i) {
    double x = 20.0 * i / 2000;
    CHECK(best <= multi(x) + 1e-9);
  }
}

TEST_CASE("grid maximization is the mirrored scan") {
  auto bump = [](double x) { return std::exp(-(x - 2) * (x - 2)); };
  ScanExtremum m = grid_max(bump, 0, 5, 128);
  CHECK(std::abs(m.x - 2.0) < 1e-8);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-12));

  // endpoint maxima must win over interior candidates
  auto ramp = [](double x) { return x; };
  ScanExtremum e = grid_max(ramp, 0, 4, 32);
  CHECK(e.x == doctest::Approx(4.0));
  CHECK(e.value == doctest::Approx(4.0));
}
