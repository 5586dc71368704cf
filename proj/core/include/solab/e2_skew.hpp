#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solab/frame.hpp"
#include "solab/ivp.hpp"

namespace solab::e2 {

// Even profile eps(b) entering the E(2) skew-soliton system.
struct EpsilonProfile {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;

  static EpsilonProfile zero();
  static EpsilonProfile quadratic_bump();  // b^2 exp(-b^2)
  static EpsilonProfile poly(double beta);  // beta b^2, beta >= 0
  // sum_k coeffs[k] b^{2k}; even by construction.
  static EpsilonProfile even_polynomial(std::vector<double> coeffs,
                                        std::string name = "even-polynomial");
};

// Admissibility items: (i) eps(0) = 0 and eps >= 0, (ii) eps'(0) = 0 and
// eps'(b) > -2b, (iii) even extension. Checked on a grid over [0, b_max].
struct Admissibility {
  bool admissible = true;
  std::string violated_item;  // "i", "ii" or "iii"
  std::string detail;
  bool near_boundary = false;  // min (eps' + 2b)/(2b) below 1e-3
  double boundary_margin = 0;
};
Admissibility check_admissible(const EpsilonProfile& eps, double b_max = 1e3,
                               int samples = 2001);

class InadmissibleProfile : public std::invalid_argument {
 public:
  InadmissibleProfile(const std::string& item, const std::string& what)
      : std::invalid_argument(what), item_(item) {}
  const std::string& item() const { return item_; }

 private:
  std::string item_;
};

// Throws InadmissibleProfile naming the violated item.
void require_admissible(const EpsilonProfile& eps, double b_max = 1e3);

struct E2State {
  double a = 0, b = 0, c = 0, f = 0, t = 0;
};

// (a', b', c', f') for
//   2a'/a = c^2 - a^2,  2b'/b = a^2 + c^2,
//   2c'/c = a^2 - c^2 + 2a^2 b^2 + 2 eps(b) a^2,  f' = 2 eps(b) a^2.
// Requires a, c > 0 and b >= 0 (b = 0 gives the equilibria (q, 0, q)).
std::array<double, 4> vector_field(const E2State& s, const EpsilonProfile& eps);

using Matrix3 = std::array<std::array<double, 3>, 3>;
// Analytic Jacobian of (a', b', c') with respect to (a, b, c).
Matrix3 jacobian(const E2State& s, const EpsilonProfile& eps);
// Real parts of the eigenvalues, ascending.
std::array<double, 3> eigenvalues(const Matrix3& m);

enum class Classification { case1, case2, case3_unstable_curve, ambiguous };
const char* to_string(Classification c);

struct BlowUp {
  std::string variable;  // "a" or "c"
  double xi = 0;         // fitted blow-up time
  double exponent = 0;   // fitted p in y ~ |t - xi|^p
  int fit_points = 0;
};

// Monitor ids logged at every accepted step. The five identities are
// relative residuals with derivatives taken from the vector field.
inline constexpr const char* kMonitorAB = "ab";
inline constexpr const char* kMonitorBC = "bc";
inline constexpr const char* kMonitorAC = "ac";
inline constexpr const char* kMonitorAoverB = "a/b";
inline constexpr const char* kMonitorC2A2 = "c2-a2";
inline constexpr const char* kMonitorRegion = "region";  // scaled by a^2 + c^2

// State layout along the integration: (a, b, c, f, r) with r' = abc.
struct E2Trajectory {
  numerics::Trajectory path;
  EpsilonProfile eps;
  Classification classification = Classification::ambiguous;
  double q = 0;      // shooting q, or the fitted equilibrium for case 3
  double delta = 0;  // shooting offset (0 for Cauchy runs)
  double region_violation = 0;  // largest scaled region residual
  double region_violation_t = 0;
  BlowUp blowup;
  std::string note;

  E2State state_at(double t) const;
  // Lookups along a forward trajectory through the increasing b and r.
  double t_at_b(double b) const;
  double t_at_r(double r) const;
};

class TrajectoryError : public std::runtime_error {
 public:
  TrajectoryError(const std::string& what, double t, double residual)
      : std::runtime_error(what), t_(t), residual_(residual) {}
  double t() const { return t_; }
  double residual() const { return residual_; }

 private:
  double t_;
  double residual_;
};

// Scaled invariant-region residual max(0, a^2 - c^2, c^2 - a^2 - 2a^2(b^2+eps))
// divided by a^2 + c^2.
double region_residual(const E2State& s, const EpsilonProfile& eps);

struct ShootOptions {
  double b_max = 1e3;
  double region_tol = 1e-8;
};

// Integrates from (q, delta q, q) along the unstable direction (the b-axis)
// until b reaches b_max, with r(t0) = delta q from the linearised tail.
// Throws TrajectoryError on a region violation beyond region_tol or when the
// run stops before b_max.
E2Trajectory shoot_unstable(double q, const EpsilonProfile& eps, double delta,
                            const numerics::IvpSolver& s = {},
                            const ShootOptions& o = {});

struct CauchyOptions {
  double t_span = 1e4;    // how far back to integrate
  double blowup = 1e8;    // max(a, b, c) beyond this counts as blow-up
  double b_equilibrium = 1e-2;  // b below this, inside the region, counts as case 3
};

// Integrates backward from `initial` and reads off the signature: a blowing
// up (case 1), c blowing up (case 2), or b decaying inside the invariant
// region toward (q, 0, q) (case 3, q fitted). Anything else is ambiguous.
E2Trajectory classify_cauchy(const E2State& initial, const EpsilonProfile& eps,
                             const numerics::IvpSolver& s = {},
                             const CauchyOptions& o = {});

// Classification implied by the sign data at a single state.
Classification sign_class(const E2State& s, const EpsilonProfile& eps);

struct DistanceProfile {
  double backward_length = 0;   // from -inf to the point where b = b_ref
  double tail_below = 0;        // from -inf to the point where b = b_tail
  double b_ref = 1.0;
  double b_tail = 1e-6;
  double forward_length = 0;    // between b = b_lo and b = b_hi
  double b_lo = 10, b_hi = 100;
  double K2 = 0;                // min over [b_lo, b_hi] of b * 2sqrt(S)/(S+1), S = 1+b^2+eps
  double forward_minorant = 0;  // K2 ln(b_hi/b_lo)
  double K1 = 0;                // min b'/b^3 for b > b_p
  double K1_last_decade = 0;    // same minimum restricted to the last decade of b
  double b_p = 0;               // first b with a/c < 1 - 1e-6
  double ac_bound_margin = 0;   // min (ac / (q^2 sqrt((2+b^2)/2)) - 1) for b > b_p
  double ac_literal_margin = 0; // min (ac / (q^2 sqrt(2+b^2)) - 1) for b > b_p
  double nullcline_margin = 0;  // min over samples of a/c - 1/sqrt(1+b^2+eps)
};
// Requires a case-3 trajectory from shoot_unstable reaching b_hi.
DistanceProfile distance_profile(const E2Trajectory& traj);

struct BoltReport {
  double db_dr = 0;  // at r = r_probe
  double r_probe = 1e-4;
  // (a^2 - c^2)/r^2 and (cr - ab)/r^3 at r = 1e-1, 1e-2, 1e-3, 1e-4.
  std::array<double, 4> radii{1e-1, 1e-2, 1e-3, 1e-4};
  std::array<double, 4> smooth2{};
  std::array<double, 4> kahler{};
  std::array<double, 4> even_slope{};  // d(a^2 + c^2)/dr / r
  double smooth2_drift = 0;  // largest relative change per decade over r in [1e-3, 1e-1]
  double kahler_drift = 0;
  double even_drift = 0;
  bool pass = false;
};
BoltReport bolt_smoothness(const E2Trajectory& traj, double db_dr_tol = 1e-3,
                           double drift_tol = 0.1);

// Frame point of the E(2) metric at time t on the trajectory, with
// f'(t) = 2 eps(b) a^2 and lambda = -1.
frame::FramePoint frame_point(const E2Trajectory& traj, double t);
frame::FramePoint frame_point(const E2State& s, const EpsilonProfile& eps,
                              double lambda = -1.0);
// tau = sqrt2 r along the trajectory.
frame::FrameStructure e2_frame(const E2Trajectory& traj);

struct SkewResidualReport {
  double skew = 0;            // max over samples of the scaled tau-reduced equations
  double skew_absolute = 0;   // unscaled; grows like 1/b^2 toward the bolt from rounding
  double killing_frame = 0;   // min over samples of |B + C + F + G|
  double killing_coordinate = 0;  // min over samples of Gamma_1z^1 a^2 - Gamma_z1^1 b^2
  int samples = 0;
};
// Evaluated at `samples` times equally spaced along the trajectory.
SkewResidualReport skew_soliton_residual(const E2Trajectory& traj, int samples = 50);

}  // namespace solab::e2
