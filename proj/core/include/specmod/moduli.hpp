#pragma once

#include <limits>

#include "specmod/spectral.hpp"
#include "specmod/symbols.hpp"
#include "specmod/weights.hpp"

namespace specmod {

struct SupModulus {
  double value = 0;
  double argmax = 0;  // a maximizing t in [0, delta]
};

// Uniform modulus: max over t in [0, delta] of ||Delta_t x||, where
// ||Delta_t x||^2 = sum psi(l t)|amp(l)|^2.  Grid step <= pi / (64 * harmonic
// * max|l|) so the fastest atom is well resolved, then golden-section
// refinement of every bracketed local maximum.
SupModulus omega_sup(const SpectralElement& x, const SymbolPair& s,
                     double delta);

// Averaged modulus via the kernel: (sum Gamma(V; delta*l)|amp(l)|^2)^{1/2}.
// Exact finite sum over atoms; delta = 0 gives 0.
double omega_2v(const SpectralElement& x, const GammaKernel& k, double delta);

// Weighted p-mean modulus:
//   ((1/delta) * int_0^delta ||Delta_t x||^p V(t/delta) dt)^{1/p}.
// The integrand is normalized by the sup modulus before raising to the p-th
// power, so p up to ~1024 stays in range.  p = infinity is accepted as an
// alias for omega_sup.  Requires p >= 1; for p < 2 the monotone comparison
// with omega_2v is not guaranteed (flagged by callers, not here).
double omega_pv(const SpectralElement& x, const SymbolPair& s, const Weight& V,
                double p, double delta);

inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

}  // namespace specmod
