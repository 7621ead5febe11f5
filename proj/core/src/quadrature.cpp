#include "specmod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace specmod {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
  double a, b;
  double integral;
  double err;
};

struct WorseError {
  bool operator()(const Panel& p, const Panel& q) const {
    return p.err < q.err;
  }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  Panel p{a, b, 0, 0};
  // max_depth = 0: one application of the 15-point rule; the embedded 7-point
  // Gauss result supplies the error estimate.
  p.integral = Rule::integrate(f, a, b, 0, 0.0, &p.err);
  if (!std::isfinite(p.integral) || !std::isfinite(p.err)) {
    std::ostringstream msg;
    msg << "non-finite integrand on [" << a << ", " << b << "]";
    throw QuadratureFailure(msg.str());
  }
  return p;
}

// Compensated accumulation keeps panel sums honest when thousands of panels
// of wildly different magnitude are combined.
struct KahanSum {
  double total = 0, carry = 0;
  void add(double v) {
    double y = v - carry;
    double t = total + y;
    carry = (t - total) - y;
    total = t;
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> nodes, const QuadratureOptions& opt) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  nodes.erase(std::remove_if(nodes.begin(), nodes.end(),
                             [&](double x) { return !(x > a && x < b); }),
              nodes.end());
  nodes.push_back(a);
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::priority_queue<Panel, std::vector<Panel>, WorseError> queue;
  int used = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    queue.push(evaluate(f, nodes[i], nodes[i + 1]));
    ++used;
  }

  auto totals = [&queue] {
    // The queue is small enough to copy for the running totals; convergence
    // checks happen only between refinement rounds.
    std::priority_queue<Panel, std::vector<Panel>, WorseError> copy = queue;
    KahanSum integral, err;
    while (!copy.empty()) {
      integral.add(copy.top().integral);
      err.add(copy.top().err);
      copy.pop();
    }
    return std::pair<double, double>(integral.total, err.total);
  };

  // Refine worst-first.  Re-sum totals every round at first, then every few
  // splits once the panel count grows (the re-sum is O(panels)).
  int since_check = 0;
  auto [total, err_total] = totals();
  while (err_total > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (used >= opt.panel_budget) {
      std::ostringstream msg;
      msg << "panel budget " << opt.panel_budget
          << " exhausted: error estimate " << err_total << " over ["
          << nodes.front() << ", " << nodes.back() << "]";
      throw QuadratureFailure(msg.str());
    }
    Panel worst = queue.top();
    queue.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at rounding resolution; its estimate cannot improve.
      queue.push(worst);
      break;
    }
    queue.push(evaluate(f, worst.a, mid));
    queue.push(evaluate(f, mid, worst.b));
    ++used;

    int stride = used < 64 ? 1 : 8;
    if (++since_check >= stride) {
      since_check = 0;
      std::tie(total, err_total) = totals();
    }
  }
  std::tie(total, err_total) = totals();
  if (err_total > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    std::ostringstream msg;
    msg << "adaptive refinement stalled at error estimate " << err_total;
    throw QuadratureFailure(msg.str());
  }
  return sign * total;
}

}  // namespace specmod
