#include "solab/finite_difference.hpp"

#include <stdexcept>

namespace solab::numerics {

double fd_derivative(const ScalarFn& f, double x, int order, double h) {
  if (!(h > 0)) throw std::invalid_argument("fd_derivative: h must be > 0");
  // Make x +- h exactly representable offsets of x.
  volatile double xp = x + h;
  const double hh = xp - x;
  switch (order) {
    case 1: return (f(x + hh) - f(x - hh)) / (2 * hh);
    case 2: return (f(x + hh) - 2 * f(x) + f(x - hh)) / (hh * hh);
    default: throw std::invalid_argument("fd_derivative: order must be 1 or 2");
  }
}

}  // namespace solab::numerics
