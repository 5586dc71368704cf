#pragma once

#include "solab/quadrature.hpp"

namespace solab::numerics {

// Central differences with truncation error O(h^2):
//   order 1: (f(x+h) - f(x-h)) / (2h)
//   order 2: (f(x+h) - 2 f(x) + f(x-h)) / h^2
double fd_derivative(const ScalarFn& f, double x, int order, double h);

}  // namespace solab::numerics
