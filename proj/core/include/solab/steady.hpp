#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solab/frame.hpp"
#include "solab/frame_families.hpp"

namespace solab::steady {

// Steady (lambda = 0) tau-dependent solitons.
//
// Q = 2L + sum_j (C_j - H_j + A_j - F_j). Case I is Q = f'(tau), case II is
// N_i = 0 for every i; the two may hold together.
enum class SteadyCase { I, II, both, neither };
const char* to_string(SteadyCase c);

// Requires lambda = 0. Q = f' is tested relative to max(1, |Q|, |f'|).
SteadyCase case_split(const frame::FramePoint& p, double tol = 1e-9);
SteadyCase case_split(const frame::FrameStructure& fs, double tau, double tol = 1e-9);

// Case I has no nonconstant solutions: differentiating its first-order
// relation forces c0^3 prod a_i^2 sum (Gamma_jj^z)^2 / (l_j^2 a_j^4) = 0.
class NoCaseOneSolution : public std::domain_error {
 public:
  NoCaseOneSolution();
};
struct SteadyI {
  double c0 = 1;
  std::vector<double> a, ell;
};
// Always throws NoCaseOneSolution.
[[noreturn]] void case_one_frame(const SteadyI& p);

// Case II with constant a_i, b_i = l_i a_i and
//   c(t)^2 = 1 / (k2 e^{k1 t} + k beta / k1),   f'(t) = k alpha c,
// alpha = prod(a_i b_i) c. beta is prod(a_i b_i), which reduces to
// prod a_i^2 for l_i = 1. The orbit algebra has Gamma_ii^z = 0,
// Gamma_iz^i = l_i^2 and Gamma_zi^i = 1.
struct SteadyII {
  double k = 1;
  double beta = 1;
  double k1 = 1;
  double k2 = 0;
  std::vector<double> ell{1.0};
  std::vector<double> a;  // filled so that prod(l_i a_i^2) = beta when left empty

  // Positivity interval of c^2; infinite ends are +-inf.
  double t_lo = 0;
  double t_hi = 0;
  // Zero of k2 e^{k1 t} + k beta / k1 when it bounds the interval.
  std::optional<double> boundary;

  int n() const { return static_cast<int>(ell.size()); }
  bool contains(double t) const { return t > t_lo && t < t_hi; }
  // The tanh^{-1} length formula is real exactly when k k1 > 0 and k2 < 0.
  bool closed_form_length_admissible() const { return k * k1 > 0 && k2 < 0; }
};

// Validates the constants, fills a_i and the positivity interval. Throws
// std::invalid_argument for k1 = 0, beta <= 0, l_i <= 0, a_i <= 0, an
// a_i list inconsistent with beta, or an empty positivity interval.
SteadyII make_steady_ii(double k, double beta, double k1, double k2,
                        std::vector<double> ell = {1.0}, std::vector<double> a = {});

// u(t) = k2 e^{k1 t} + k beta / k1, evaluated without cancellation near the
// boundary.
double u_of_t(const SteadyII& p, double t);
// Throws std::domain_error outside the positivity interval.
double c_of_t(const SteadyII& p, double t);
double c_prime(const SteadyII& p, double t);
double c_second(const SteadyII& p, double t);

// k beta c' + c'^2/c^3 - c''/c^2 with c' and c'' from Richardson-extrapolated
// central differences of c_of_t.
double ii_simple_residual_fd(const SteadyII& p, double t);

// 2 sqrt(beta/(k k1)) atanh(sqrt(k1/(k beta)) sqrt(u)) between t0 and t1,
// returned as a nonnegative length. Endpoints may sit on the boundary.
// Throws std::domain_error when the formula is not real or an endpoint is
// outside the closed interval.
double normal_geodesic_length(const SteadyII& p, double t0, double t1);
// Quadrature of beta c(t) dt. With a finite boundary the variable
// t = t* -+ s^2 removes the inverse square root singularity.
double normal_geodesic_length_quadrature(const SteadyII& p, double t0, double t1);

struct EndReport {
  double t_limit = 0;   // boundary value or +-inf
  bool finite = false;  // finite length from t_ref
  double length = 0;    // from t_ref; the partial sum at the verdict when infinite
  double closed_form = 0;  // NaN unless the tanh^{-1} formula applies
};
struct IncompletenessReport {
  std::string verdict;  // "incomplete" or "no blow-up in window"
  double t_ref = 0;
  EndReport lower, upper;
  std::string note;
};
IncompletenessReport incompleteness_verdict(const SteadyII& p);

struct ProfileRow {
  double t = 0, c = 0, length = 0;  // length from the first row
};
std::vector<ProfileRow> profile(const SteadyII& p, double t0, double t1, int samples);

// Frame of the case-II metric in the chart t, with lambda = 0 and
// dtau/dt = sqrt2 beta c; tau = 0 at `t_ref` (default: the verdict's t_ref).
frame::FramePoint frame_point(const SteadyII& p, double t);
frame::BianchiConstants bianchi_constants(const SteadyII& p);
frame::FrameStructure steady_frame(const SteadyII& p);
frame::FrameStructure steady_frame(const SteadyII& p, double t_ref);

}  // namespace solab::steady
