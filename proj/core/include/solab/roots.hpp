#pragma once

#include "solab/quadrature.hpp"

namespace solab::numerics {

// Root of an increasing function g on (lo, hi), starting from `start`.
// The bracket is grown geometrically from `start` in the direction of the
// sign change (first step `step`), then refined by Newton steps on g' that
// fall back to bisection whenever they leave the bracket. Throws
// std::out_of_range when no sign change is found inside (lo, hi).
double solve_increasing(const ScalarFn& g, const ScalarFn& dg, double start,
                        double lo, double hi, double step, double tol = 1e-14);

}  // namespace solab::numerics
