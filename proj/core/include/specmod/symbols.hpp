#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specmod/spectral.hpp"

namespace specmod {

struct InvalidOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A difference-generating symbol: phi acts on unit-circle points, and
// psi(t) = |phi(e^{it})|^2 is the nonnegative 2pi-periodic profile that all
// norm computations consume.  phi may be absent for user-supplied profiles
// (only |phi| on the circle enters any computed quantity); operations that
// genuinely need phi say so and reject psi-only symbols.
struct SymbolPair {
  std::function<Complex(Complex)> phi;  // may be empty
  std::function<double(double)> psi;
  bool even_flag = false;
  std::string label;
  // Highest angular rate present in psi (m for the built-in order-m family);
  // grids sampling psi(l*t) scale their density by this factor.
  int harmonic = 1;

  bool has_phi() const { return static_cast<bool>(phi); }
};

// The order-m difference family: phi(z) = (z-1)^m, so
// psi(t) = (2-2cos t)^m = (2 sin(t/2))^{2m}; the sine form is used internally
// (it is exact at t=0 and loses no digits for small t).
SymbolPair classical_symbol(int m);

// User-supplied profile from samples of one period: pairs (t, psi(t)) with
// t in [0, 2pi], linearly interpolated and periodized.  Validated on a grid:
// psi(0)=0, nonnegativity, periodicity within tol.
SymbolPair tabulated_symbol(const std::string& label,
                            std::vector<std::pair<double, double>> samples,
                            double tol = 1e-9);

// Grid validation of the profile contract (psi(0) small, psi >= 0, 2pi
// periodicity, evenness when flagged).  Returns the worst violation.
double validate_symbol(const SymbolPair& s, int grid_n = 1000);

// The period mean (1/2pi) * integral of psi over [0, 2pi], by adaptive
// quadrature to absolute tolerance 1e-11.  For the order-m family this equals
// the central binomial coefficient binomial(2m, m).
double mean_value(const SymbolPair& s);

// Certification report for the symmetry-and-averages class that the sharp
// admissibility results require.  All checks are grid-based; margins are
// violations (positive = broken), so a member has every margin <= tol.
struct PsiMembershipReport {
  bool member = false;
  double symmetry_margin = 0;       // worst |psi(-t) - psi(t)|
  double half_symmetry_margin = 0;  // worst |psi(pi-t) - psi(pi+t)|
  double average_margin = 0;  // worst (1/t)int_0^t psi - (1/pi)int_0^pi psi
  int grid_n = 0;
  double tol = 0;
  std::string note;
};

PsiMembershipReport is_in_Psi(const SymbolPair& s, int grid_n,
                              double tol = 1e-9);

// Generalized difference via the multiplier phi(e^{i*l*t}); needs phi.
SpectralElement apply_difference(const SymbolPair& s, const SpectralElement& x,
                                 double t);

// ||Delta_t x||: computed directly from psi as (sum psi(l*t)|amp|^2)^{1/2}.
double difference_norm(const SpectralElement& x, const SymbolPair& s, double t);

// Cross-check of the two routes to the order-m difference: the multiplier
// (z-1)^m against the alternating binomial sum of translates
// sum_k (-1)^{m-k} C(m,k) x(. + k t).  Returns the atomwise max deviation.
double difference_symbol_check(const SymbolPair& s, int m,
                               const SpectralElement& x, double t);

}  // namespace specmod
