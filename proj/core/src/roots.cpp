#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "solab/roots.hpp"

namespace solab::numerics {

double solve_increasing(const ScalarFn& g, const ScalarFn& dg, double start,
                        double lo, double hi, double step, double tol) {
  const double g0 = g(start);
  if (g0 == 0) return start;
  const double dir = g0 < 0 ? 1.0 : -1.0;
  const double limit = dir > 0 ? hi : lo;
  double a = start, fa = g0;
  double b = start, fb = g0;
  for (int it = 0;; ++it) {
    double cand = b + dir * step;
    if (dir * (cand - limit) >= 0) cand = b + 0.5 * (limit - b);
    if (cand == b || it > 2000) {
      throw std::out_of_range("solve_increasing: no sign change before the limit");
    }
    a = b;
    fa = fb;
    b = cand;
    fb = g(b);
    if ((fa < 0) != (fb < 0)) break;
    step *= 2;
  }
  double left = std::min(a, b), right = std::max(a, b);
  double u = 0.5 * (left + right);
  for (int it = 0; it < 300; ++it) {
    const double fu = g(u);
    if (fu == 0) return u;
    if (fu < 0) {
      left = u;
    } else {
      right = u;
    }
    double next = u - fu / dg(u);
    if (!(next > left && next < right)) next = 0.5 * (left + right);
    if (std::abs(next - u) <= tol * std::max(1.0, std::abs(u)) ||
        right - left <= tol * std::max(1.0, std::abs(u))) {
      return next;
    }
    u = next;
  }
  return u;
}

}  // namespace solab::numerics
