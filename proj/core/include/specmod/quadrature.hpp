#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specmod {

// Thrown when the panel budget runs out before the error target is met.
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  // Convergence target: total error estimate <= max(abs_tol, rel_tol*|I|).
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  // Upper bound on the number of panels produced by adaptive bisection.
  int panel_budget = 20000;
};

// Adaptive integration of f over [a,b].  Each panel is handled by a single
// Gauss-Kronrod 15-point rule whose embedded Gauss rule supplies an error
// estimate; the panel with the worst estimate is bisected until the combined
// estimate meets the target.  `nodes` lists interior points where the initial
// panels must break (weight breakpoints, oscillation nodes); points outside
// (a,b) are ignored.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> nodes = {},
                 const QuadratureOptions& opt = {});

}  // namespace specmod
