#include <doctest.h>

#include <cmath>
#include <random>

#include "specmod/inequalities.hpp"

using namespace specmod;

namespace {

double cs_norm(const std::vector<Complex>& v) {
  double s = 0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("operator pairing bound in the diagonal model") {
  std::mt19937_64 rng(404);

  SUBCASE("identity pair reduces to the Cauchy-Schwarz inequality") {
    DiagonalOperatorPair ops;
    ops.t_diag.assign(6, {1, 0});
    ops.s_diag.assign(6, {1, 0});
    for (int i = 0; i < 20; ++i) {
      auto x = random_vector(rng, 6);
      auto f = random_vector(rng, 6);
      InequalityReport r = verify_operator_inequality(ops, x, f);
      CHECK(r.certified);
      CHECK(r.lhs <= cs_norm(x) * cs_norm(f) + 1e-12);
    }
  }
  SUBCASE("random pairs with vanishing entries certify with tight slack") {
    std::uniform_real_distribution<double> u(0, 1);
    std::normal_distribution<double> g(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
      DiagonalOperatorPair ops;
      for (int i = 0; i < 8; ++i) {
        bool zero_t = u(rng) < 0.25;
        ops.t_diag.push_back(zero_t ? Complex{0, 0} : Complex{g(rng), g(rng)});
        ops.s_diag.push_back(Complex{g(rng), g(rng)});
      }
      auto x = random_vector(rng, 8);
      auto f = random_vector(rng, 8);
      InequalityReport r = verify_operator_inequality(ops, x, f);
      CHECK(r.lhs <= r.rhs + 1e-12);
      CHECK(r.certified);

      auto xt = operator_extremal(ops, f);
      InequalityReport eq = verify_operator_inequality(ops, xt, f);
      if (!eq.degenerate) CHECK(std::abs(eq.ratio - 1.0) <= 1e-10);
    }
  }
  SUBCASE("equal operators collapse the extremal formula") {
    DiagonalOperatorPair ops;
    for (int i = 0; i < 5; ++i) {
      Complex s{1.0 + i, 0.5};
      ops.t_diag.push_back(s);
      ops.s_diag.push_back(s);
    }
    auto f = random_vector(rng, 5);
    auto xt = operator_extremal(ops, f);
    for (int i = 0; i < 5; ++i)
      CHECK(std::abs(xt[i] - f[i] / ops.s_diag[i]) <= 1e-14);
  }
  SUBCASE("zero f gives the zero extremal") {
    DiagonalOperatorPair ops;
    ops.t_diag.assign(4, {2, 0});
    ops.s_diag.assign(4, {1, 1});
    auto xt = operator_extremal(ops, std::vector<Complex>(4, {0, 0}));
    for (const Complex& c : xt) CHECK(c == Complex{0, 0});
  }
  SUBCASE("losing invertibility on the range is an error") {
    DiagonalOperatorPair ops;
    ops.t_diag = {{1, 0}, {2, 0}};
    ops.s_diag = {{1, 0}, {0, 0}};
    std::vector<Complex> v = {{1, 0}, {1, 0}};
    CHECK_THROWS_AS(verify_operator_inequality(ops, v, v),
                    NotInvertibleOnRange);
  }
  SUBCASE("dimension mismatch is rejected") {
    DiagonalOperatorPair ops;
    ops.t_diag.assign(3, {1, 0});
    ops.s_diag.assign(3, {1, 0});
    std::vector<Complex> short_v(2, {1, 0});
    std::vector<Complex> ok_v(3, {1, 0});
    CHECK_THROWS_AS(verify_operator_inequality(ops, short_v, ok_v),
                    std::invalid_argument);
  }
}

TEST_CASE("residual functional bound and its extremal element") {
  double sigma = 4.0;
  LinearMethod proj = projection_method(sigma);
  LinearMethod plat = plateau_method(sigma, 1.5);
  GammaKernel k(named_weight(NamedWeight::chernykh1), classical_symbol(1));
  double delta = M_PI / sigma;
  std::mt19937_64 rng(777);
  ElementOptions eo;
  eo.integer_frequencies = false;

  SUBCASE("spectrum under the plateau gives zero left side") {
    SpectralElement x({{0.5, {3, 1}}, {-1.0, {0, 2}}});
    SpectralElement f = random_element(rng, eo);
    InequalityReport r = functional_bound(x, f, plat, k, delta);
    CHECK(r.lhs == 0.0);
    CHECK(r.certified);
  }
  SUBCASE("random pairs certify under both methods") {
    for (const LinearMethod& L : {proj, plat}) {
      for (int i = 0; i < 50; ++i) {
        SpectralElement x = random_element(rng, eo);
        SpectralElement f = random_element(rng, eo);
        InequalityReport r = functional_bound(x, f, L, k, delta);
        CHECK(r.lhs <= r.rhs + 1e-10 * std::max(1.0, r.rhs));
      }
    }
  }
  SUBCASE("single-atom functional outside the cutoff") {
    for (int i = 0; i < 25; ++i) {
      SpectralElement f = SpectralElement::single(sigma + 1, {1, 0});
      SpectralElement x = random_element(rng, eo);
      InequalityReport r = functional_bound(x, f, proj, k, delta);
      CHECK(r.lhs <= r.rhs + 1e-10 * std::max(1.0, r.rhs));
    }
  }
  SUBCASE("the extremal element attains the bound") {
    for (const LinearMethod& L : {proj, plat}) {
      int attained = 0;
      for (int i = 0; i < 40; ++i) {
        SpectralElement f = random_element(rng, eo);
        SpectralElement xt = functional_extremal(f, L, k, delta);
        if (xt.empty()) continue;  // residual symbol vanished on the spectrum
        InequalityReport r = functional_bound(xt, f, L, k, delta);
        if (r.degenerate) continue;
        CHECK(r.ratio >= 1.0 - 1e-10);
        CHECK(r.ratio <= 1.0 + 1e-10);
        ++attained;
      }
      CHECK(attained > 10);
    }
  }
  SUBCASE("extremal of an in-plateau functional is the zero element") {
    SpectralElement f = SpectralElement::single(0.5, {2, 2});
    CHECK(functional_extremal(f, plat, k, delta).empty());
  }
  SUBCASE("single-atom extremal closed form") {
    SpectralElement f = SpectralElement::single(2 * sigma, {1, 0});
    SpectralElement xt = functional_extremal(f, proj, k, delta);
    REQUIRE(xt.size() == 1);
    double g = k(delta * 2 * sigma);
    CHECK(std::abs(xt.atoms()[0].amplitude - Complex{1.0 / g, 0}) <= 1e-12);
  }
  SUBCASE("a malformed method with nonzero residual at the origin diverges") {
    LinearMethod broken;
    broken.sigma = 2.0;
    broken.epsilon = -1.0;  // deliberately violates 0 < epsilon
    broken.lam = {[](double) { return Complex{0.5, 0}; }, "half"};
    SpectralElement f = SpectralElement::single(0.0, {1, 0});
    SpectralElement x = SpectralElement::single(1.0, {1, 0});

    InequalityReport r = functional_bound(x, f, broken, k, delta);
    CHECK(std::isinf(r.rhs));
    CHECK(r.certified);  // vacuously
    CHECK_THROWS_AS(functional_extremal(f, broken, k, delta), DivergentBound);
  }
}

TEST_CASE("residual norm bound") {
  double sigma = 5.0;
  double delta = M_PI / sigma;
  GammaKernel k(named_weight(NamedWeight::chernykh1), classical_symbol(1));
  std::mt19937_64 rng(909);
  ElementOptions eo;
  eo.integer_frequencies = false;

  SUBCASE("projection method certifies on random elements") {
    LinearMethod proj = projection_method(sigma);
    for (int i = 0; i < 50; ++i) {
      SpectralElement x = random_element(rng, eo);
      InequalityReport r = norm_bound(x, proj, k, delta);
      if (r.degenerate) continue;
      CHECK(r.lhs <= r.rhs + 1e-9 * std::max(1.0, r.rhs));
    }
  }
  SUBCASE("plateau method keeps the inner branch finite") {
    LinearMethod plat = plateau_method(sigma, 2.0);
    for (int i = 0; i < 50; ++i) {
      SpectralElement x = random_element(rng, eo);
      InequalityReport r = norm_bound(x, plat, k, delta);
      if (r.degenerate) continue;
      CHECK(std::isfinite(r.rhs));
      CHECK(r.lhs <= r.rhs + 1e-9 * std::max(1.0, r.rhs));
    }
  }
  SUBCASE("an atom at the outer-window argmin is nearly extremal") {
    LinearMethod proj = projection_method(sigma);
    WindowInfimum g = script_g(k, delta, sigma);
    SpectralElement x = SpectralElement::single(g.argmin, {1, 0});
    InequalityReport r = norm_bound(x, proj, k, delta);
    CHECK(r.ratio >= 0.999);
    CHECK(r.ratio <= 1.0 + 1e-9);
  }
}

TEST_CASE("best-approximation bound") {
  GammaKernel k(named_weight(NamedWeight::chernykh1), classical_symbol(1));

  SUBCASE("single-atom closed form at the classical constant") {
    for (int n : {2, 5}) {
      SpectralElement x = SpectralElement::single(n, {1, 0});
      InequalityReport r = jackson_bound(x, n, k, M_PI / n, p_infinity);
      CHECK(r.lhs == 1.0);
      CHECK(r.constant == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
      CHECK(r.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
      CHECK(r.ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
      CHECK(r.certified);
    }
  }
  SUBCASE("spectrum inside the cutoff is certified with zero left side") {
    SpectralElement x({{0.5, {1, 0}}, {-2.0, {0, 3}}});
    InequalityReport r = jackson_bound(x, 4.0, k, M_PI / 4, 2.0);
    CHECK(r.lhs == 0.0);
    CHECK(r.certified);
    CHECK_FALSE(r.degenerate);
  }
  SUBCASE("the zero element is degenerate, not a failure") {
    InequalityReport r = jackson_bound(SpectralElement{}, 3.0, k, 1.0, 2.0);
    CHECK(r.degenerate);
    CHECK(std::isnan(r.ratio));
  }
  SUBCASE("p below two is rejected") {
    CHECK_THROWS_AS(
        jackson_bound(SpectralElement::single(1, {1, 0}), 1.0, k, 1.0, 1.5),
        std::invalid_argument);
  }
  SUBCASE("two-level weight bound holds on wide random elements") {
    GammaKernel kv(named_weight(NamedWeight::v_hat), classical_symbol(1));
    double mean = mean_value(classical_symbol(1));
    double theorem_constant = std::sqrt(4.0 / 3.0) / std::sqrt(mean);
    std::mt19937_64 rng(2048);
    ElementOptions eo;
    eo.max_atoms = 50;
    eo.integer_frequencies = false;
    double sigma = 6.0;
    for (int i = 0; i < 25; ++i) {
      SpectralElement x = random_element(rng, eo);
      InequalityReport r = jackson_bound(x, sigma, kv, M_PI / sigma, 2.0);
      if (r.degenerate) continue;
      CHECK(r.lhs <= r.rhs + 1e-9 * std::max(1.0, r.rhs));
      // the windowed constant is at least as strong as the theorem constant
      double omega = r.rhs / r.constant;
      CHECK(r.lhs <= theorem_constant * omega + 1e-9 * std::max(1.0, r.rhs));
    }
  }
}

TEST_CASE("sharpness of the windowed constant") {
  struct Case {
    NamedWeight w;
    int m;
  };
  for (Case c : {Case{NamedWeight::chernykh1, 1}, Case{NamedWeight::v_hat, 2},
                 Case{NamedWeight::uniform, 1}, Case{NamedWeight::v_star, 3}}) {
    GammaKernel k(named_weight(c.w), classical_symbol(c.m));
    double sigma = 3.0;
    InequalityReport r = sharpness_search(sigma, k, M_PI / sigma);
    CHECK(r.ratio >= 1.0 - 1e-6);
    CHECK(r.ratio <= 1.0 + 1e-9);
    CHECK(r.lhs == 1.0);
    // single-atom algebra: lhs^2 * window infimum == omega_2v^2
    double window = 1.0 / (r.constant * r.constant);
    double omega_sq = r.rhs / r.constant * (r.rhs / r.constant);
    CHECK(std::abs(r.lhs * r.lhs * window - omega_sq) <=
          1e-9 * std::max(1.0, omega_sq));
  }
}

TEST_CASE("classical-constant campaigns") {
  SUBCASE("first-order constant") {
    InequalityReport r = chernykh_check(1, 3, 200, 11);
    CHECK(r.certified);
    CHECK(r.constant == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(r.ratio <= 1.0 + 1e-9);
    CHECK(std::stod(r.grid_meta.at("sharpness_ratio")) >= 1.0 - 1e-6);
  }
  SUBCASE("second-order constant") {
    InequalityReport r = chernykh_check(2, 2, 200, 12);
    CHECK(r.certified);
    CHECK(r.constant == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(r.ratio <= 1.0 + 1e-9);
  }
  SUBCASE("determinism under a fixed seed") {
    InequalityReport a = chernykh_check(1, 3, 50, 99);
    InequalityReport b = chernykh_check(1, 3, 50, 99);
    CHECK(a.ratio == b.ratio);
    CHECK(a.lhs == b.lhs);
  }
}

TEST_CASE("half-step upper-bound campaigns") {
  SUBCASE("orders two and three") {
    InequalityReport r2 = chi_bound_check(2, 4, 200, 21);
    CHECK(r2.certified);
    CHECK(r2.constant == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-15));

    InequalityReport r3 = chi_bound_check(3, 4, 200, 22);
    CHECK(r3.certified);
    CHECK(r3.constant == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("the cutoff-frequency atom realizes the half-step ratio") {
    for (int m : {2, 3}) {
      InequalityReport r = chi_bound_check(m, 4, 1, 5);
      double atom_ratio = std::stod(r.grid_meta.at("single_atom_ratio"));
      CHECK(atom_ratio ==
            doctest::Approx(std::pow(2.0, -m)).epsilon(1e-9));
    }
  }
  SUBCASE("order one is rejected") {
    CHECK_THROWS_AS(chi_bound_check(1, 4, 10, 1), InvalidOrder);
  }
}

TEST_CASE("step-width scan for the order-two constant") {
  std::vector<double> grid;
  for (double d = 0.2 * M_PI; d <= 2 * M_PI + 1e-12; d += M_PI / 25)
    grid.push_back(d);
  DeltaScanReport rep = minimal_delta_scan(2, 3, 60, grid, 31);

  REQUIRE(rep.delta_grid.size() == rep.max_ratio.size());
  CHECK(rep.found);
  CHECK(rep.within_14pi);
  CHECK(rep.empirical_minimal_delta <= 1.4 * M_PI + M_PI / 25 + 1e-12);
  // the final grid point (full period over n) must always certify
  CHECK(rep.max_ratio.back() <= 1.0 + 1e-9);
  // too-small steps overshoot: the modulus vanishes faster than the tail
  CHECK(rep.max_ratio.front() > 1.0);
  CHECK(rep.summary.certified);
}

TEST_CASE("piecewise-quadratic weight admissibility across orders") {
  auto reports = vstar_admissibility_check({1, 2, 3});
  REQUIRE(reports.size() == 3);
  for (const auto& rep : reports) {
    CHECK(rep.certified);
    CHECK(rep.margin >= -1e-6);
    CHECK(rep.gamma == doctest::Approx(7 * M_PI / 5).epsilon(1e-15));
  }
}

TEST_CASE("two-level weight bound end to end") {
  VhatBoundReport rep = vhat_bound_check({1, 2}, 40, 61);
  CHECK(rep.all_certified);
  REQUIRE(rep.margins.size() == 2);
  for (const auto& m : rep.margins) CHECK(m.margin >= -1e-6);
  REQUIRE(rep.campaigns.size() == 2 * 3);  // p in {2, 4, inf} per order
  for (const auto& c : rep.campaigns) {
    CHECK(c.certified);
    CHECK(c.ratio <= 1.0 + 1e-9);
  }
}
