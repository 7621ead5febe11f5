#include "specmod/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specmod/minimize.hpp"
#include "specmod/quadrature.hpp"

namespace specmod {

SupModulus omega_sup(const SpectralElement& x, const SymbolPair& s,
                     double delta) {
  if (!(delta > 0)) throw std::invalid_argument("omega_sup needs delta > 0");
  if (x.empty()) return {0, 0};

  auto g = [&x, &s](double t) { return difference_norm(x, s, t); };

  // The fastest atom oscillates at rate harmonic * max|l|; resolve it with
  // at least 64 samples per pi of phase.
  double rate = std::max(1.0, s.harmonic * x.max_abs_frequency());
  int n = static_cast<int>(std::ceil(64.0 * rate * delta / M_PI));
  n = std::clamp(n, 64, 400000);

  ScanExtremum r = grid_max(g, 0.0, delta, n);
  return {r.value, r.x};
}

double omega_2v(const SpectralElement& x, const GammaKernel& k, double delta) {
  if (delta < 0) throw std::invalid_argument("omega_2v needs delta >= 0");
  if (delta == 0 || x.empty()) return 0;
  double sum = 0;
  for (const Atom& a : x.atoms())
    sum += k(delta * a.frequency) * std::norm(a.amplitude);
  return std::sqrt(std::max(0.0, sum));
}

double omega_pv(const SpectralElement& x, const SymbolPair& s, const Weight& V,
                double p, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("omega_pv needs delta > 0");
  if (!(p >= 1)) throw std::invalid_argument("omega_pv needs p >= 1");
  if (x.empty()) return 0;
  if (std::isinf(p)) return omega_sup(x, s, delta).value;

  // Normalize by the sup so the p-th power stays in range for p ~ 1000:
  // omega_p = M * ((1/delta) int (||D_t x|| / M)^p V(t/delta) dt)^{1/p}.
  SupModulus sup = omega_sup(x, s, delta);
  double M = sup.value;
  if (M == 0) return 0;

  auto integrand = [&x, &s, &V, p, M, delta](double t) {
    double q = 0;
    for (const Atom& a : x.atoms())
      q += s.psi(a.frequency * t) * std::norm(a.amplitude);
    q /= M * M;  // = (||D_t x|| / M)^2 in [0, 1+eps]
    if (q <= 0) return 0.0;
    return std::pow(q, 0.5 * p) * V.eval(t / delta);
  };

  std::vector<double> nodes;
  for (double b : V.breakpoints) nodes.push_back(b * delta);
  nodes.push_back(sup.argmax);  // the peak that dominates at large p
  double rate = std::max(1.0, s.harmonic * x.max_abs_frequency());
  double step = M_PI / rate;
  int count = static_cast<int>(delta / step);
  int stride = count > 2048 ? (count + 2047) / 2048 : 1;
  for (int k = stride; k <= count; k += stride) nodes.push_back(k * step);

  QuadratureOptions opt;
  opt.abs_tol = 1e-280;  // positive integrand; drive by the relative target
  // A relative error eps in I becomes eps/p in I^{1/p}, so the target may
  // grow with p; without this the near-delta peak at p ~ 1000 exhausts the
  // panel budget chasing digits the root immediately discards.
  opt.rel_tol = std::min(1e-6, 1e-10 * std::max(1.0, p));
  double I = integrate(integrand, 0.0, delta, std::move(nodes), opt);
  if (I <= 0) return 0;
  return M * std::pow(I / delta, 1.0 / p);
}

}  // namespace specmod
