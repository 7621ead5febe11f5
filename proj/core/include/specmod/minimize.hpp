#pragma once

#include <functional>

namespace specmod {

struct ScanExtremum {
  double x = 0;      // abscissa of the best point found
  double value = 0;  // f(x)
};

// One-dimensional global search on [a,b]: evaluate f at n+1 equispaced points,
// then tighten every bracketed local minimum by golden-section search until the
// bracket is narrower than tol.  Endpoints compete as candidates, so monotone
// functions resolve to a or b.  Deterministic for a given (f, a, b, n).
ScanExtremum grid_min(const std::function<double(double)>& f, double a,
                      double b, int n, double tol = 1e-9);

// Same machinery on -f.
ScanExtremum grid_max(const std::function<double(double)>& f, double a,
                      double b, int n, double tol = 1e-9);

}  // namespace specmod
