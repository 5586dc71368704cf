#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace solab::numerics {

using ScalarFn = std::function<double(double)>;

struct Quadrature {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error_estimate() const { return error_; }

 private:
  double estimate_;
  double error_;
};

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  int subdivisions = 0;
  int evaluations = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature. The panel with the
// largest error estimate is bisected first, so refinement concentrates at
// singular endpoints. Nodes never touch the endpoints, which makes
// integrable endpoint singularities admissible. Singular points should sit
// at an endpoint with good absolute resolution (ideally 0); substitute
// variables otherwise.
QuadratureResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                                    const Quadrature& q = {});

// Same as integrate_detailed, returning only the value. Throws
// QuadratureError on non-convergence and std::domain_error on NaN.
double integrate(const ScalarFn& f, double lo, double hi,
                 const Quadrature& q = {});

enum class Verdict { converges, diverges };

struct DivergenceOptions {
  double cap = 1e12;        // |partial integral| beyond this means divergence
  int min_panels = 10;      // panels integrated before any verdict
  int fit_panels = 8;       // panels used to fit the decay rate
  int max_panels = 400;
  double decay_threshold = 0.05;
};

struct ImproperIntegral {
  Verdict verdict = Verdict::converges;
  double value = 0;           // limit, or the partial integral at the verdict
  double decay_exponent = 0;  // p in |panel_k| ~ 2^{-p k}; p <= 0 means growth
  double reached = 0;         // farthest abscissa integrated
  int panels = 0;
};

// Oriented integral from `from` toward `toward`, where `toward` is +-inf or a
// finite point at which f may blow up. The range is cut into geometric
// panels (doubling toward infinity, halving toward a finite point). The
// panel contributions are fitted to 2^{-p k}: p above the threshold means
// convergence, with the geometric tail added; otherwise, or once the partial
// sum exceeds the cap, the integral is declared divergent. Intended for
// integrands of one sign near the limit.
ImproperIntegral integrate_improper(const ScalarFn& f, double from,
                                    double toward, const Quadrature& q = {},
                                    const DivergenceOptions& opts = {});

}  // namespace solab::numerics
