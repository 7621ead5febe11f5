#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "specmod/weights.hpp"

using namespace specmod;

namespace {

// --- Test-local closed-form oracles ----------------------------------------
// Independent antiderivative evaluations for the averaged profile
// Gamma(V;t) = int_0^1 psi(ts) V(s) ds with psi(t) = 2 - 2 cos t.

// uniform weight: Gamma(t) = 2 (1 - sin t / t)
double gamma_uniform_order1(double t) {
  if (t == 0) return 0;
  return 2 * (1 - std::sin(t) / t);
}

// half-sine weight (pi/2) sin(pi s): Gamma(t) = 2 - pi^2 (1 + cos t)/(pi^2 - t^2)
double gamma_halfsine_order1(double t) {
  if (std::abs(std::abs(t) - M_PI) < 1e-5) {
    // removable singularity: expand around |t| = pi
    double h = std::abs(t) - M_PI;
    return 2 + M_PI * M_PI * (h / 2 - h * h * h / 24) /
                   (std::abs(t) + M_PI);
  }
  return 2 - M_PI * M_PI * (1 + std::cos(t)) / (M_PI * M_PI - t * t);
}

// two-level weight 5/4 on [0,1/2], 3/4 on (1/2,1]:
// Gamma(t) = 2 - (sin(t/2) + 1.5 sin t)/t
double gamma_twolevel_order1(double t) {
  if (t == 0) return 0;
  return 2 - (std::sin(t / 2) + 1.5 * std::sin(t)) / t;
}

// Exact piecewise antiderivatives of the bump profile behind v_star:
//   z(s) = 2s/7            on [0, 1/7]
//   z(s) = -s^2/2 + 3s/7 - 1/98   on [1/7, 5/7]
//   z(s) = s^2/2 - s + 1/2  = (s-1)^2/2  on [5/7, 1]
double bump_l1_oracle() {
  auto a1 = [](double s) { return s * s / 7; };
  auto a2 = [](double s) { return -s * s * s / 6 + 3 * s * s / 14 - s / 98; };
  auto a3 = [](double s) { return (s - 1) * (s - 1) * (s - 1) / 6; };
  double p1 = a1(1.0 / 7) - a1(0.0);
  double p2 = a2(5.0 / 7) - a2(1.0 / 7);
  double p3 = a3(1.0) - a3(5.0 / 7);
  return p1 + p2 + p3;
}

double z_raw(double s) {
  if (s < 1.0 / 7) return 2 * s / 7;
  if (s < 5.0 / 7) return -s * s / 2 + 3 * s / 7 - 1.0 / 98;
  return s * s / 2 - s + 0.5;
}

}  // namespace

TEST_CASE("named weights carry their defining values and unit mass") {
  SUBCASE("two-level weight") {
    Weight w = named_weight(NamedWeight::v_hat);
    CHECK(w.eval(0.25) == 1.25);
    CHECK(w.eval(0.75) == 0.75);
    REQUIRE(w.breakpoints.size() == 1);
    CHECK(w.breakpoints[0] == 0.5);
    CHECK(validate_weight(w) <= 1e-11);
  }
  SUBCASE("bump weight mass is the exact rational") {
    double oracle = bump_l1_oracle();
    CHECK(std::abs(oracle - 47.0 / 1029.0) <= 1e-14);
    // piece values: 1/343 + 40/1029 + 4/1029
    CHECK(std::abs(oracle - (1.0 / 343 + 40.0 / 1029 + 4.0 / 1029)) <= 1e-16);

    Weight w = named_weight(NamedWeight::v_star);
    REQUIRE(w.breakpoints.size() == 2);
    CHECK(w.breakpoints[0] == doctest::Approx(1.0 / 7).epsilon(1e-15));
    CHECK(w.breakpoints[1] == doctest::Approx(5.0 / 7).epsilon(1e-15));
    // normalized profile times the mass reproduces the raw bump
    for (double s : {0.05, 0.1, 0.3, 0.5, 0.7, 0.8, 0.99})
      CHECK(w.eval(s) * (47.0 / 1029.0) ==
            doctest::Approx(z_raw(s)).epsilon(1e-14));
    CHECK(validate_weight(w) <= 1e-11);
  }
  SUBCASE("half-sine weight") {
    Weight w = named_weight(NamedWeight::chernykh1);
    CHECK(w.eval(0.5) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(validate_weight(w) <= 1e-11);
  }
  SUBCASE("two-harmonic weight is nonnegative by the product identity") {
    Weight w = named_weight(NamedWeight::chernykh2);
    for (int i = 0; i <= 1000; ++i) {
      double s = i / 1000.0;
      CHECK(w.eval(s) >= -1e-15);
      double product_form =
          (M_PI / 2) * std::sin(M_PI * s) * (1 + std::cos(M_PI * s));
      CHECK(std::abs(w.eval(s) - product_form) <= 1e-13);
    }
    CHECK(validate_weight(w) <= 1e-11);
  }
  SUBCASE("uniform weight") {
    Weight w = named_weight(NamedWeight::uniform);
    CHECK(w.eval(0.123) == 1.0);
    CHECK(w.breakpoints.empty());
    CHECK(validate_weight(w) <= 1e-12);
  }
  SUBCASE("name lookup lists the valid options on a miss") {
    CHECK_THROWS_WITH_AS(weight_by_name("no_such"),
                         doctest::Contains("uniform"), InvalidWeight);
  }
}

TEST_CASE("averaged profile matches the closed forms") {
  SymbolPair s1 = classical_symbol(1);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ts(0.0, 50.0);

  SUBCASE("uniform weight") {
    GammaKernel k(named_weight(NamedWeight::uniform), s1);
    CHECK(k(0.0) == 0.0);
    CHECK(k(M_PI) == doctest::Approx(2.0).epsilon(1e-12));
    for (int i = 0; i < 100; ++i) {
      double t = ts(rng);
      CHECK(std::abs(k(t) - gamma_uniform_order1(t)) <= 1e-9);
    }
  }
  SUBCASE("two-level weight") {
    GammaKernel k(named_weight(NamedWeight::v_hat), s1);
    CHECK(k(0.0) == 0.0);
    for (int i = 0; i < 100; ++i) {
      double t = ts(rng);
      CHECK(std::abs(k(t) - gamma_twolevel_order1(t)) <= 1e-9);
    }
  }
  SUBCASE("half-sine weight") {
    GammaKernel k(named_weight(NamedWeight::chernykh1), s1);
    CHECK(k(M_PI) == doctest::Approx(2.0).epsilon(1e-10));
    for (int i = 0; i < 100; ++i) {
      double t = ts(rng);
      CHECK(std::abs(k(t) - gamma_halfsine_order1(t)) <= 1e-9);
    }
  }
  SUBCASE("evenness and boundedness") {
    for (NamedWeight nw : {NamedWeight::uniform, NamedWeight::chernykh1,
                           NamedWeight::v_star, NamedWeight::v_hat}) {
      GammaKernel k(named_weight(nw), s1);
      for (double t : {0.7, 3.3, 12.1}) {
        CHECK(k(-t) == k(t));          // even profile, memoized on |t|
        CHECK(k(t) <= 4.0 + 1e-9);     // Gamma <= max psi for unit mass
        CHECK(k(t) > 0.0);             // vanishes only at the origin
      }
    }
  }
}

TEST_CASE("kernel memo is safe under concurrent evaluation") {
  GammaKernel k(named_weight(NamedWeight::chernykh1), classical_symbol(2));
  std::vector<double> pts;
  for (int i = 1; i <= 200; ++i) pts.push_back(0.11 * i);

  std::vector<std::vector<double>> results(4);
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&, w] {
      results[w].reserve(pts.size());
      for (double t : pts) results[w].push_back(k(t));
    });
  for (auto& th : workers) th.join();

  for (int w = 1; w < 4; ++w) CHECK(results[w] == results[0]);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(results[0][i] == k(pts[i]));  // memo returns identical bits
}

TEST_CASE("inner-window infimum is pinned to the origin") {
  GammaKernel k(named_weight(NamedWeight::uniform), classical_symbol(1));
  ExtremumResult h = script_h(k, 1.0, M_PI);
  CHECK(h.value == 0.0);
  CHECK(std::abs(h.argmin) <= 1e-9);

  GammaKernel k2(named_weight(NamedWeight::chernykh2), classical_symbol(2));
  ExtremumResult h2 = script_h(k2, 0.5, 7.0);
  CHECK(h2.value == 0.0);
}

TEST_CASE("outer-window infimum estimates") {
  SUBCASE("half-sine kernel attains 2 at the window edge") {
    GammaKernel k(named_weight(NamedWeight::chernykh1), classical_symbol(1));
    WindowInfimum g = script_g(k, 1.0, M_PI);
    CHECK(std::abs(g.value - 2.0) <= 1e-6);
    CHECK(std::abs(g.argmin - M_PI) <= 1e-6);
    CHECK(g.u_lo == doctest::Approx(M_PI));
    CHECK(!g.window_note.empty());
    CHECK(g.doubling.size() >= 3);  // running minima recorded as the window doubles
  }
  SUBCASE("two-level kernel stays above three quarters of the mean") {
    for (int m : {1, 2, 3}) {
      GammaKernel k(named_weight(NamedWeight::v_hat), classical_symbol(m));
      WindowInfimum g = script_g(k, 1.0, M_PI);
      double mean = mean_value(classical_symbol(m));
      CHECK(g.value >= 0.75 * mean - 1e-6);
    }
  }
  SUBCASE("window override widens the search") {
    GammaKernel k(named_weight(NamedWeight::uniform), classical_symbol(1));
    WindowInfimum g = script_g(k, 1.0, M_PI, 200.0);
    CHECK(g.u_hi == doctest::Approx(200.0));
    // uniform kernel dips toward 2 - eps on each lobe; wider window can only
    // lower the running estimate
    WindowInfimum narrow = script_g(k, 1.0, M_PI, 50.0);
    CHECK(g.value <= narrow.value + 1e-12);
  }
  SUBCASE("scaling identity holds bit-for-bit in the u substitution") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> gam(2.0, 20.0), sig(0.5, 10.0);
    for (NamedWeight nw : {NamedWeight::uniform, NamedWeight::chernykh1,
                           NamedWeight::v_hat}) {
      GammaKernel k(named_weight(nw), classical_symbol(1));
      for (int i = 0; i < 10; ++i) {
        double gamma = gam(rng), sigma = sig(rng);
        WindowInfimum a = script_g(k, gamma / sigma, sigma);
        WindowInfimum b = script_g(k, 1.0, gamma);
        CHECK(std::abs(a.value - b.value) <= 1e-10);
      }
    }
  }
}

TEST_CASE("admissibility margins") {
  SUBCASE("bump weight certifies at gamma = 7 pi / 5") {
    for (int m : {1, 2}) {
      GammaKernel k(named_weight(NamedWeight::v_star), classical_symbol(m));
      AdmissibilityReport rep = check_weight_admissibility(k, 7 * M_PI / 5);
      CHECK(rep.certified);
      CHECK(rep.margin >= -1e-6);
      CHECK(rep.mean ==
            doctest::Approx(mean_value(classical_symbol(m))).epsilon(1e-12));
    }
  }
  SUBCASE("uniform weight fails well inside the first lobe") {
    GammaKernel k(named_weight(NamedWeight::uniform), classical_symbol(1));
    AdmissibilityReport rep = check_weight_admissibility(k, M_PI / 2);
    CHECK_FALSE(rep.certified);
    CHECK(rep.margin < -0.5);
  }
}

TEST_CASE("custom weights load from two-column tables") {
  // tent profile on [0,1]: raw mass 1/4, so normalization multiplies by 4
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 200; ++i) {
    double s = i / 200.0;
    samples.push_back({s, s < 0.5 ? s : 1 - s});
  }
  Weight w = weight_from_table("tent", samples);
  CHECK(w.eval(0.25) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(w.eval(0.5) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(validate_weight(w) <= 1e-10);
  CHECK(w.breakpoints.size() == 199);

  SUBCASE("short tables extend as constants") {
    Weight c = weight_from_table("plateau", {{0.4, 2.0}, {0.6, 2.0}});
    CHECK(c.eval(0.0) == doctest::Approx(1.0));  // normalized constant
    CHECK(c.eval(0.9) == doctest::Approx(1.0));
  }
  SUBCASE("negative samples are rejected") {
    CHECK_THROWS_AS(
        weight_from_table("bad", {{0.0, 1.0}, {0.5, -0.2}, {1.0, 1.0}}),
        InvalidWeight);
  }
}
