#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "solab/frame.hpp"
#include "solab/quadrature.hpp"

namespace solab::heisenberg {

// Expanding Kahler-Ricci soliton on H_{2n+1} x R:
//   g = phi sum(sigma_i^2 + rho_i^2) + (F_n/phi^{n-1}) zeta^2
//       + (phi^{n-1}/F_n) dphi^2,   f = -phi,  lambda = -1.
struct HeisenbergSoliton {
  int n = 1;
  double lambda = -1.0;
  double k = -1.0;

  explicit HeisenbergSoliton(int n_ = 1);
};

// Largest n accepted; (n+1)! must fit in a 64-bit integer.
inline constexpr int kMaxN = 18;

// F_n(phi) = 2(-1)^{n+1}(n+1)!/phi [sum_{k=0}^{n+1} (-phi)^k/k! - e^{-phi}].
// Below theta_n = 1 + n/2 the bracket is summed as its alternating tail
// series, which avoids the cancellation of the direct form. n = 0 is
// accepted as well since it enters the derivative relation for n = 1.
double F(int n, double phi);

// F_n' = -((phi+1)/phi) F_n + 2 phi^n.
double F_prime(int n, double phi);

// F_n'' from differentiating the first-order equation once more.
double F_second(int n, double phi);

struct MetricComponents {
  double g_fiber = 0;   // phi
  double g_zeta = 0;    // F_n / phi^{n-1}
  double g_phiphi = 0;  // phi^{n-1} / F_n
};
MetricComponents metric_components(const HeisenbergSoliton& s, double phi);

// Closed-form frame curvatures. ricci_mismatch is left at zero.
frame::CurvatureReport curvatures(const HeisenbergSoliton& s, double phi);

// Diagonal Hessian entries -N f' (x_i block) and 2f'' (k,t block) in the
// orthonormal frame, from the frame coefficients. Adding ricci_xy and ricci_kt
// respectively gives lambda.
struct HessianComponents {
  double xx = 0;
  double kt = 0;
};
HessianComponents hessian_components(const HeisenbergSoliton& s, double phi);

// Curvature operator of the n = 1 soliton on Lambda^2 = Lambda^+ (+) Lambda^-.
struct Dim4CurvatureOperator {
  double phi = 0;
  double p = 0;
  double q_mix = 0;
  double r = 0;
  std::array<double, 6> eigenvalues{};       // engine operator, ascending
  std::array<double, 6> model_eigenvalues{};  // {0,0,r,r, roots}, ascending
  double determinant = 0;                     // p^2 - 2pr - q_mix^2
  double determinant_identity = 0;            // 4 (2cosh phi - 2 - phi^2)/(phi^4 e^phi)
  double engine_deviation = 0;  // max |engine matrix - block model| in the Lambda^+- basis
};
// Only defined for n = 1 (std::invalid_argument otherwise). Throws
// std::runtime_error when the determinant identity fails by more than 1e-10.
Dim4CurvatureOperator dim4_operator(const HeisenbergSoliton& s, double phi);

// 4 (2cosh phi - 2 - phi^2) / (phi^4 e^phi), with a series below phi = 1.
double dim4_determinant_closed_form(double phi);

// Sec of a unit decomposable 2-form with Lambda^+- coordinates a_1, b_1.
double sec_decomposable(double phi, double a1, double b1);

struct SecExtremes {
  double inf = 0;
  double sup = 0;
  double phi_at_inf = 0;
  double phi_at_sup = 0;
};
// Samples (a_1, b_1) uniformly in [-1/sqrt2, 1/sqrt2]^2 with a seeded
// mt19937_64; every phi on the grid sees the same sample set.
SecExtremes sec_extremes_dim4(const std::vector<double>& phi_grid,
                              int form_samples, std::uint64_t seed = 0);

struct DistanceResult {
  numerics::Verdict verdict = numerics::Verdict::converges;
  double value = 0;
  double growth_exponent = 0;  // panel decay exponent when divergent
};
// Integral of sqrt(phi^{n-1}/F_n) over [phi0, phi1]. Either endpoint may be
// 0 or +inf, in which case divergence is tested with a cap of 1e6.
DistanceResult distance(const HeisenbergSoliton& s, double phi0, double phi1);

// Oriented integral of phi^{n-1}/F_n from phi0 to phi1; phi1 may be 0 or inf.
DistanceResult gradient_flow_time(const HeisenbergSoliton& s, double phi0,
                                  double phi1);

enum class AsymptoticEnd { cone, cusp };
// Max over the three metric components of |g/g_model - 1|.
double asymptotic_model_deviation(const HeisenbergSoliton& s, AsymptoticEnd end,
                                  double phi);

// q(phi) = q0 + int_{phi0}^{phi} dphi/F_n and its inverse.
struct QDomain {
  double q_a = 0;  // may be -inf
  double q_b = 0;  // may be +inf
  bool q_a_finite = false;
  bool q_b_finite = false;
};
QDomain q_domain(const HeisenbergSoliton& s, double phi0, double q0);
double q_of_phi(const HeisenbergSoliton& s, double phi0, double q0, double phi);
// Throws std::out_of_range when q lies outside the computed domain.
double phi_of_q(const HeisenbergSoliton& s, double phi0, double q0, double q);

struct TypeCheck {
  double sup_abs_sec = 0;
  double max_frame_sec = 0;  // largest frame sectional curvature seen
  bool frame_sec_negative = true;
  std::string verdict;  // "bounded" or "unbounded"
};
// Frame sectional curvatures on the grid, random planes through the
// curvature engine and, for n = 1, sampled decomposable forms.
TypeCheck type_check(const HeisenbergSoliton& s,
                     const std::vector<double>& phi_grid, int plane_samples = 200,
                     std::uint64_t seed = 0);

// Frames built from the diagonal-metric coefficients with a_i = b_i =
// sqrt(phi) and c^2 = G(phi). The soliton uses G = F_n/phi^{n-1}; the models
// use G = 2phi (cone) and G = 2phi^2/(n+2) (cusp).
frame::FramePoint soliton_frame_point(const HeisenbergSoliton& s, double phi);
frame::FrameStructure soliton_frame(const HeisenbergSoliton& s);
frame::FramePoint model_frame_point(int n, AsymptoticEnd end, double phi);
frame::FrameStructure model_frame(int n, AsymptoticEnd end);
// tau(phi) with tau(1) = 0 on the soliton frame.
double tau_of_phi(const HeisenbergSoliton& s, double phi);
double phi_of_tau(const HeisenbergSoliton& s, double tau);

}  // namespace solab::heisenberg
