#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "specmod/moduli.hpp"
#include "specmod/report.hpp"
#include "specmod/spectral.hpp"
#include "specmod/weights.hpp"

namespace specmod {

struct NotInvertibleOnRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The bound's spectral factor diverges (atom at frequency 0 with nonzero
// residual symbol); the inequality is vacuous there, which callers may accept.
struct DivergentBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PsiClassViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A commuting operator pair realized on a finite orthonormal basis: T and S
// act diagonally with entries t_diag[i], s_diag[i].  Invertibility of S on the
// range of T means s_diag[i] != 0 wherever t_diag[i] != 0.
struct DiagonalOperatorPair {
  std::vector<Complex> t_diag;
  std::vector<Complex> s_diag;
  std::size_t dim() const { return t_diag.size(); }
};

// Checks |(Tx, f)| <= ||Sx|| * ||((S restricted to range T)^{-1} T)* f|| in
// the diagonal model, with the 0/0 = 0 convention on indices where T vanishes.
InequalityReport verify_operator_inequality(const DiagonalOperatorPair& ops,
                                            const std::vector<Complex>& x,
                                            const std::vector<Complex>& f);

// The input attaining equality: x_i = (1/s_i) conj(t_i/s_i) f_i where
// t_i != 0, zero elsewhere.
std::vector<Complex> operator_extremal(const DiagonalOperatorPair& ops,
                                       const std::vector<Complex>& f);

// Residual-functional bound: |(x - Lx, f)| against
// (sum |theta(l)|^2 |amp_f(l)|^2 / Gamma(V; delta*l))^{1/2} * omega_2v(x).
InequalityReport functional_bound(const SpectralElement& x,
                                  const SpectralElement& f,
                                  const LinearMethod& L, const GammaKernel& k,
                                  double delta);

// The element attaining equality: each atom (l, c) of f maps to
// (l, conj(theta(l)) / Gamma(V; delta*l) * c); atoms with theta(l) = 0 drop.
SpectralElement functional_extremal(const SpectralElement& f,
                                    const LinearMethod& L,
                                    const GammaKernel& k, double delta);

// Squared-norm bound ||x - Lx||^2 <= C * omega_2v(x)^2 with
// C = max( sup_{|t|<sigma} |theta(t)|^2 / Gamma(V; delta*t), 1/G_window ).
// For the projection method the first branch is identically zero.
InequalityReport norm_bound(const SpectralElement& x, const LinearMethod& L,
                            const GammaKernel& k, double delta);

// Best-approximation bound E_sigma(x) <= G_window^{-1/2} * omega, where omega
// is omega_2v for p = 2, omega_sup for p = infinity, omega_pv otherwise
// (p in [2, inf]).  The report carries the infimum's window note; the
// certification is meaningful when the spectrum stays inside the window.
// t_max widens the infimum window (0 = default window).
InequalityReport jackson_bound(const SpectralElement& x, double sigma,
                               const GammaKernel& k, double delta, double p,
                               double t_max = 0);

// Places a single atom at the windowed-infimum argmin and evaluates the p = 2
// bound there; by construction the ratio approaches 1 from below.
InequalityReport sharpness_search(double sigma, const GammaKernel& k,
                                  double delta, double t_max = 0);

// --- Randomized campaign inputs -------------------------------------------

struct ElementOptions {
  int max_atoms = 12;
  bool integer_frequencies = true;  // else uniform real in [-freq_range, +]
  int integer_range = 32;
  double freq_range = 20.0;
  double amp_scale = 1.0;
};

// Reproducible random element: Gaussian complex amplitudes on distinct
// frequencies drawn per the options.
SpectralElement random_element(std::mt19937_64& rng, const ElementOptions& eo);

std::vector<Complex> random_vector(std::mt19937_64& rng, std::size_t dim,
                                   double scale = 1.0);

// --- Campaigns over random instances --------------------------------------

// Sharp trigonometric-approximation constants: for m = 1 certifies
// E_n <= (1/sqrt 2) * omega_1(f, pi/n) with the first sine weight; for m >= 2
// certifies E_n <= binomial(2m,m)^{-1/2} * omega_m(f, 2pi/n) with the second.
// Reports the max ratio against the classical constant over `trials` random
// integer-frequency elements, plus the single-atom sharpness ratio.
InequalityReport chernykh_check(int m, int n, int trials, std::uint64_t seed);

// Half-step upper bound E_n <= (sqrt(m+1)/2^m) * omega_m(f, pi/n) for m >= 2
// (consistency check of the constant, not a sharpness claim).
InequalityReport chi_bound_check(int m, int n, int trials, std::uint64_t seed);

// For each delta in the grid, the max over trials of
// E_n(f) * sqrt(binomial(2m,m)) / omega_m(f, delta/n); the smallest delta
// whose max is <= 1 estimates the minimal usable step from below.
struct DeltaScanReport {
  std::vector<double> delta_grid;
  std::vector<double> max_ratio;          // per delta
  double empirical_minimal_delta = 0;     // smallest grid delta with max <= 1
  bool found = false;
  bool within_14pi = false;               // empirical minimum <= 1.4*pi + step
  InequalityReport summary;
};

DeltaScanReport minimal_delta_scan(int m, int n, int trials,
                                   const std::vector<double>& delta_grid,
                                   std::uint64_t seed);

// Admissibility of the piecewise-quadratic weight at cutoff ratio 7pi/5 for
// each listed order: margin of the windowed infimum over the period mean.
std::vector<AdmissibilityReport> vstar_admissibility_check(
    const std::vector<int>& m_list);

// Two-level weight at cutoff ratio pi: windowed infimum >= (3/4) * mean for
// each order, then an end-to-end campaign of the (4/3)^{1/2} * mean^{-1/2}
// bound over random elements for each listed p.
struct VhatBoundReport {
  std::vector<AdmissibilityReport> margins;  // against 0.75 * mean
  std::vector<InequalityReport> campaigns;   // one per (m, p)
  bool all_certified = false;
};

VhatBoundReport vhat_bound_check(const std::vector<int>& m_list, int trials,
                                 std::uint64_t seed,
                                 const std::vector<double>& p_list = {2, 4,
                                                                      p_infinity});

}  // namespace specmod
