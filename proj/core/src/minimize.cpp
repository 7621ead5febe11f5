#include "specmod/minimize.hpp"

#include <cmath>
#include <vector>

namespace specmod {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/phi

// Golden-section descent on a bracket [lo, hi] assumed to contain a local
// minimum; shrinks to width tol and returns the best interior point seen.
ScanExtremum golden(const std::function<double(double)>& f, double lo,
                    double hi, double tol) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? ScanExtremum{x1, f1} : ScanExtremum{x2, f2};
}

}  // namespace

ScanExtremum grid_min(const std::function<double(double)>& f, double a,
                      double b, int n, double tol) {
  if (n < 2) n = 2;
  if (b < a) std::swap(a, b);
  std::vector<double> xs(n + 1), fs(n + 1);
  double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) {
    xs[i] = (i == n) ? b : a + i * h;
    fs[i] = f(xs[i]);
  }

  ScanExtremum best{xs[0], fs[0]};
  for (int i = 1; i <= n; ++i)
    if (fs[i] < best.value) best = {xs[i], fs[i]};

  // Every interior grid point that beats both neighbours brackets a local
  // minimum; refine each bracket, not only the global grid winner, so a
  // narrow dip between coarse samples cannot hide.
  for (int i = 1; i < n; ++i) {
    if (fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1]) {
      ScanExtremum r = golden(f, xs[i - 1], xs[i + 1], tol);
      if (r.value < best.value) best = r;
    }
  }
  // Edges: a minimum may sit between the boundary and the first sample.
  if (n >= 1 && fs[0] < fs[1]) {
    ScanExtremum r = golden(f, xs[0], xs[1], tol);
    if (r.value < best.value) best = r;
  }
  if (n >= 1 && fs[n] < fs[n - 1]) {
    ScanExtremum r = golden(f, xs[n - 1], xs[n], tol);
    if (r.value < best.value) best = r;
  }
  return best;
}

ScanExtremum grid_max(const std::function<double(double)>& f, double a,
                      double b, int n, double tol) {
  ScanExtremum r = grid_min([&f](double x) { return -f(x); }, a, b, n, tol);
  return {r.x, -r.value};
}

}  // namespace specmod
