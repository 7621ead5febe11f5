#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "specmod/quadrature.hpp"
#include "specmod/symbols.hpp"

namespace specmod {

struct InvalidWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A nonnegative integrable weight on [0,1], stored already normalized to unit
// L1 norm.  Breakpoints mark the interior points where the defining formula
// changes; quadrature panels always split there.
struct Weight {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;  // sorted, inside (0,1)
  std::string label;
};

enum class NamedWeight { uniform, chernykh1, chernykh2, v_star, v_hat };

// The five built-in weights.  Normalization constants are exact:
//   uniform    : 1
//   chernykh1  : (pi/2) sin(pi s)                       (int sin(pi s) = 2/pi)
//   chernykh2  : (pi/4)(sin 2pi s + 2 sin pi s)         (integral 4/pi)
//   v_star     : Z(s) / (47/1029), Z piecewise quadratic with breaks 1/7, 5/7
//   v_hat      : 5/4 on [0,1/2], 3/4 on (1/2,1]
Weight named_weight(NamedWeight name);

// Parse "uniform" / "chernykh1" / ... ; throws InvalidWeight listing options.
Weight weight_by_name(const std::string& name);

// Two-column samples (s, V(s)) on [0,1], linearly interpolated, normalized on
// load; sample abscissae become breakpoints.
Weight weight_from_table(const std::string& label,
                         std::vector<std::pair<double, double>> samples);

// Grid validation: nonnegative, unit integral within 1e-11, no interval of
// zeros at grid resolution.  Returns worst violation (0 when clean).
double validate_weight(const Weight& w, int grid_n = 1000);

// The averaging kernel t -> integral over [0,1] of psi(t s) V(s) ds.  Values
// are memoized (the memo is shared across copies and safe for concurrent
// use); panels split at weight breakpoints and at the oscillation nodes where
// t*s crosses a multiple of pi/harmonic.
class GammaKernel {
 public:
  GammaKernel(Weight V, SymbolPair s, QuadratureOptions opt = {});

  double operator()(double t) const;

  const Weight& weight() const { return weight_; }
  const SymbolPair& symbol() const { return symbol_; }
  const QuadratureOptions& options() const { return opt_; }

 private:
  Weight weight_;
  SymbolPair symbol_;
  QuadratureOptions opt_;
  struct Memo;
  std::shared_ptr<Memo> memo_;
};

inline double gamma_eval(const GammaKernel& k, double t) { return k(t); }

struct ExtremumResult {
  double value = 0;
  double argmin = 0;
};

// Infimum of Gamma(V; delta*t) over |t| <= sigma.  Since Gamma vanishes at 0
// and 0 is admissible, the true value is always 0; the search is still run so
// the report is honest about the grid used.
ExtremumResult script_h(const GammaKernel& k, double delta, double sigma);

// Window estimate of the infimum of Gamma(V; delta*t) over |t| >= sigma: the
// search runs in u = delta*t over [delta*sigma, delta*t_max] with at least 32
// samples per pi/harmonic period plus golden-section refinement.  Because the
// grid depends only on the u-interval, the substitution invariance
// (delta, sigma) -> (1, delta*sigma) holds bit-for-bit.  The true infimum over
// the unbounded set can only be smaller; window_note records the running
// minima as the window doubles so the convergence is auditable.
struct WindowInfimum {
  double value = 0;
  double argmin = 0;  // in t units
  double u_lo = 0, u_hi = 0;
  std::vector<std::pair<double, double>> doubling;  // (u_end, running min)
  std::string window_note;
};

WindowInfimum script_g(const GammaKernel& k, double delta, double sigma,
                       double t_max = 0);

// Margin of the windowed infimum over the period mean of psi:
//   margin = script_g(k, 1, gamma) - mean_value(psi).
// A nonnegative margin certifies the weight/symbol pair at cutoff ratio gamma
// for the sharp-constant bounds.
struct AdmissibilityReport {
  double gamma = 0;
  double window_infimum = 0;
  double mean = 0;
  double margin = 0;
  bool certified = false;
  std::string note;
};

AdmissibilityReport check_weight_admissibility(const GammaKernel& k,
                                               double gamma,
                                               double tol = 1e-6);

}  // namespace specmod
