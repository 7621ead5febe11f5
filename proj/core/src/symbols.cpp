#include "specmod/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "specmod/quadrature.hpp"

namespace specmod {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_period(double t) {
  double u = std::fmod(t, kTwoPi);
  if (u < 0) u += kTwoPi;
  return u;
}

// Exact small binomials; m stays single-digit in every built-in use.
double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::vector<double> period_nodes(int harmonic) {
  // Break one period at the extrema spacing of the fastest component.
  std::vector<double> nodes;
  int cuts = std::max(2, 2 * harmonic);
  for (int k = 1; k < 2 * cuts; ++k) nodes.push_back(k * M_PI / cuts);
  return nodes;
}

}  // namespace

SymbolPair classical_symbol(int m) {
  if (m < 1) {
    std::ostringstream msg;
    msg << "difference order must be >= 1, got " << m;
    throw InvalidOrder(msg.str());
  }
  SymbolPair s;
  s.phi = [m](Complex z) {
    Complex w = z - Complex{1, 0};
    Complex r{1, 0};
    for (int i = 0; i < m; ++i) r *= w;
    return r;
  };
  // (2 - 2 cos t)^m written as (2 sin(t/2))^{2m}: exact zero at t = 0 and no
  // cancellation for small t.
  s.psi = [m](double t) {
    double u = 2.0 * std::sin(0.5 * t);
    double b = u * u;
    double r = 1;
    for (int i = 0; i < m; ++i) r *= b;
    return r;
  };
  s.even_flag = true;
  s.label = "classical-" + std::to_string(m);
  s.harmonic = m;
  return s;
}

SymbolPair tabulated_symbol(const std::string& label,
                            std::vector<std::pair<double, double>> samples,
                            double tol) {
  if (samples.size() < 2)
    throw InvalidSymbol("need at least two (t, psi) samples");
  std::sort(samples.begin(), samples.end());
  for (const auto& [t, v] : samples) {
    if (!std::isfinite(t) || !std::isfinite(v))
      throw InvalidSymbol("non-finite sample in " + label);
    if (v < 0) throw InvalidSymbol("negative sample in " + label);
  }
  if (samples.front().first < 0 || samples.back().first > kTwoPi)
    throw InvalidSymbol("sample abscissae must lie in [0, 2pi]");

  // Close the period: values at 0 and 2pi are identified (averaged if both
  // given), then evaluation wraps into the closed period.
  double head = samples.front().second;
  double tail = samples.back().second;
  double closure = samples.back().first >= kTwoPi - 1e-12
                       ? 0.5 * (head + tail)
                       : head;
  if (samples.back().first >= kTwoPi - 1e-12) {
    samples.front().second = closure;
    samples.back().second = closure;
  } else {
    samples.push_back({kTwoPi, closure});
  }
  if (samples.front().first > 1e-12)
    samples.insert(samples.begin(), {0.0, closure});

  auto table = std::make_shared<std::vector<std::pair<double, double>>>(
      std::move(samples));
  SymbolPair s;
  s.psi = [table](double t) {
    double u = wrap_period(t);
    const auto& tab = *table;
    auto it = std::upper_bound(
        tab.begin(), tab.end(), u,
        [](double a, const std::pair<double, double>& b) { return a < b.first; });
    if (it == tab.begin()) return tab.front().second;
    if (it == tab.end()) return tab.back().second;
    auto lo = *(it - 1);
    auto hi = *it;
    double w = hi.first == lo.first
                   ? 0.0
                   : (u - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
  };
  s.label = label;
  // No rate information in a bare table; assume a busy profile so that grids
  // sampling psi stay dense enough.
  s.harmonic = 8;

  if (s.psi(0.0) > tol)
    throw InvalidSymbol(label + ": psi(0) = " + std::to_string(s.psi(0.0)) +
                        " exceeds tolerance");
  // Auto-detect evenness so even-only speedups stay available.
  bool even = true;
  for (int i = 1; i <= 256 && even; ++i) {
    double t = kTwoPi * i / 256.0;
    if (std::abs(s.psi(-t) - s.psi(t)) > tol) even = false;
  }
  s.even_flag = even;
  return s;
}

double validate_symbol(const SymbolPair& s, int grid_n) {
  double worst = std::abs(s.psi(0.0));
  for (int i = 0; i <= grid_n; ++i) {
    double t = kTwoPi * i / grid_n;
    double v = s.psi(t);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::max(0.0, -v));           // nonnegativity
    worst = std::max(worst, std::abs(s.psi(t + kTwoPi) - v));  // periodicity
    if (s.even_flag) worst = std::max(worst, std::abs(s.psi(-t) - v));
  }
  return worst;
}

double mean_value(const SymbolPair& s) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-11;
  // Large-order profiles have period means in the tens of thousands; the
  // relative fallback keeps the target reachable above the rounding floor.
  opt.rel_tol = 1e-14;
  double integral =
      integrate(s.psi, 0.0, kTwoPi, period_nodes(s.harmonic), opt);
  return integral / kTwoPi;
}

PsiMembershipReport is_in_Psi(const SymbolPair& s, int grid_n, double tol) {
  if (grid_n < 64)
    throw std::invalid_argument(
        "membership grid must have at least 64 points");
  PsiMembershipReport rep;
  rep.grid_n = grid_n;
  rep.tol = tol;

  double psi0 = std::abs(s.psi(0.0));
  for (int i = 1; i <= grid_n; ++i) {
    double t = M_PI * i / grid_n;
    rep.symmetry_margin =
        std::max(rep.symmetry_margin, std::abs(s.psi(-t) - s.psi(t)));
    rep.half_symmetry_margin =
        std::max(rep.half_symmetry_margin,
                 std::abs(s.psi(M_PI - t) - s.psi(M_PI + t)));
  }

  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-13;
  double half_mean = integrate(s.psi, 0.0, M_PI, period_nodes(s.harmonic), opt) / M_PI;

  // Running average (1/t) int_0^t psi at the grid points, accumulated
  // segment by segment so the whole sweep costs one pass.
  double acc = 0;
  double prev = 0;
  for (int i = 1; i <= grid_n; ++i) {
    double t = M_PI * i / grid_n;
    acc += integrate(s.psi, prev, t, {}, opt);
    prev = t;
    rep.average_margin = std::max(rep.average_margin, acc / t - half_mean);
  }

  rep.member = psi0 <= tol && rep.symmetry_margin <= tol &&
               rep.half_symmetry_margin <= tol && rep.average_margin <= tol;
  std::ostringstream note;
  note << "psi(0)=" << psi0 << ", grid " << grid_n << ", tol " << tol;
  rep.note = note.str();
  return rep;
}

SpectralElement apply_difference(const SymbolPair& s, const SpectralElement& x,
                                 double t) {
  if (!s.has_phi())
    throw InvalidSymbol(s.label +
                        ": difference operator needs the circle symbol, "
                        "only the profile psi was supplied");
  auto phi = s.phi;
  return apply_multiplier(
      {[phi, t](double l) { return phi(std::exp(Complex{0, l * t})); },
       "difference symbol"},
      x);
}

double difference_norm(const SpectralElement& x, const SymbolPair& s,
                       double t) {
  double sum = 0;
  for (const Atom& a : x.atoms())
    sum += s.psi(a.frequency * t) * std::norm(a.amplitude);
  return std::sqrt(sum);
}

double difference_symbol_check(const SymbolPair& s, int m,
                               const SpectralElement& x, double t) {
  SpectralElement multiplier_route = apply_difference(s, x, t);

  SpectralElement binomial_route;
  for (int k = 0; k <= m; ++k) {
    double coef = ((m - k) % 2 == 0 ? 1.0 : -1.0) * binomial(m, k);
    binomial_route =
        add(binomial_route, scale({coef, 0}, translate(x, k * t)));
  }

  double worst = 0;
  SpectralElement diff = subtract(multiplier_route, binomial_route);
  for (const Atom& a : diff.atoms())
    worst = std::max(worst, std::abs(a.amplitude));
  return worst;
}

}  // namespace specmod
