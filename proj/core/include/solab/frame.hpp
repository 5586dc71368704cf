#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace solab::frame {

// Frame ordering used throughout: e_0 = k, e_1 = t, e_{2i} = x_i,
// e_{2i+1} = y_i for i = 1..n. Dimension is 2n + 2.
inline constexpr int kK = 0;
inline constexpr int kT = 1;
inline int x_index(int i) { return 2 * i; }  // i is 1-based
inline int y_index(int i) { return 2 * i + 1; }
inline int dimension(int n) { return 2 * n + 2; }

// Bracket coefficients at one point:
//   [k,t] = L(k+t), [x_i,y_i] = N_i(k+t),
//   [k,x_i] = A_i x_i + B_i y_i, [k,y_i] = C_i x_i + D_i y_i,
//   [t,x_i] = E_i x_i + F_i y_i, [t,y_i] = G_i x_i + H_i y_i.
struct Coefficients {
  std::vector<double> A, B, C, D, E, F, G, H, N;  // index 0 holds i = 1
  double L = 0;

  Coefficients() = default;
  explicit Coefficients(int n);
  int n() const { return static_cast<int>(A.size()); }
};

struct FramePoint {
  double tau = 0;
  double lambda = 0;
  Coefficients value;
  Coefficients deriv;  // d/dtau
  double f1 = 0;       // f'(tau)
  double f2 = 0;       // f''(tau)
  bool fd_derived = false;

  FramePoint() = default;
  explicit FramePoint(int n) : value(n), deriv(n) {}
  int n() const { return value.n(); }
};

// A coefficient as a function of tau. When `derivative` is empty the frame
// falls back to central differences and flags the point as FD-derived.
struct CoefficientFn {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

// Soliton potential; only f' and f'' enter the equations.
struct PotentialFn {
  std::function<double(double)> first;
  std::function<double(double)> second;  // optional
};

struct CoefficientFunctions {
  std::vector<CoefficientFn> A, B, C, D, E, F, G, H, N;
  CoefficientFn L;
  PotentialFn f;
};

class FrameStructure {
 public:
  using Sampler = std::function<FramePoint(double tau)>;

  FrameStructure(int n, double lambda, CoefficientFunctions fns);
  FrameStructure(int n, double lambda, Sampler sampler, std::string family);

  FramePoint at(double tau) const;
  int n() const { return n_; }
  double lambda() const { return lambda_; }
  const std::string& family() const { return family_; }

 private:
  int n_;
  double lambda_;
  std::string family_;
  Sampler sampler_;
};

// Dense (dim x dim x dim) tables.
class Table3 {
 public:
  Table3() = default;
  explicit Table3(int dim) : dim_(dim), v_(std::size_t(dim) * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  double& operator()(int a, int b, int c) { return v_[(std::size_t(a) * dim_ + b) * dim_ + c]; }
  double operator()(int a, int b, int c) const { return v_[(std::size_t(a) * dim_ + b) * dim_ + c]; }

 private:
  int dim_ = 0;
  std::vector<double> v_;
};

// Structure constants: [e_a, e_b] = sum_c s(a,b,c) e_c.
Table3 structure_constants(const Coefficients& c);

// Shear coefficients of X along a pair (e1, e2), from the four inner
// products g([X,e1],e1), g([X,e1],e2) and g([X,e2],e1), g([X,e2],e2).
struct Shear {
  double sigma1 = 0;
  double sigma2 = 0;
};
Shear shear_coefficients(const std::array<double, 2>& x_e1,
                         const std::array<double, 2>& x_e2);
Shear shear_coefficients(const FramePoint& p, int x, int e1, int e2);

double integrability_residual(const FramePoint& p);
double integrability_residual(const FrameStructure& fs, double tau);

struct KahlerResiduals {
  double rels2 = 0;         // |N - A - D|, |N + E + H|
  double closed_two = 0;    // d omega on triples meeting two subbundles
  double closed_three = 0;  // d omega on triples meeting three subbundles
  double max() const;
};
KahlerResiduals kahler_residuals(const FramePoint& p);
double kahler_residual(const FramePoint& p);
double kahler_residual(const FrameStructure& fs, double tau);

// d(omega)(e_a, e_b, e_c) from the coboundary formula; omega has constant
// frame components so only bracket terms survive.
double d_omega(const Table3& s, int a, int b, int c);

struct Connection {
  Table3 gamma;        // gamma(a,b,c) = <nabla_{e_a} e_b, e_c>
  Table3 gamma_deriv;  // d/dtau of the same
  double kahler_residual = 0;
  double integrability_residual = 0;
  bool consistent = true;  // both residuals below tolerance
};
Connection koszul_connection(const FramePoint& p, double tol = 1e-8);
Connection koszul_connection(const FrameStructure& fs, double tau,
                             double tol = 1e-8);

// Directional derivative of tau along e_a: +1 for k, -1 for t, 0 otherwise.
double dtau(int a);

// Riemann tensor Rm(a,b,c,d) = <R(e_a,e_b)e_c, e_d> with
// R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].
class Riemann {
 public:
  Riemann() = default;
  explicit Riemann(int dim) : dim_(dim), v_(std::size_t(dim) * dim * dim * dim, 0.0) {}
  int dim() const { return dim_; }
  double& operator()(int a, int b, int c, int d) {
    return v_[((std::size_t(a) * dim_ + b) * dim_ + c) * dim_ + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return v_[((std::size_t(a) * dim_ + b) * dim_ + c) * dim_ + d];
  }
  double sectional(int a, int b) const { return (*this)(a, b, b, a); }
  double ricci(int b, int c) const;  // sum_a Rm(a,b,c,a)
  // Sectional curvature of the plane spanned by orthonormal u, v.
  double sectional(const std::vector<double>& u, const std::vector<double>& v) const;

 private:
  int dim_ = 0;
  std::vector<double> v_;
};

Riemann riemann_tensor(const FramePoint& p);

// Ricci tensor predicted by the closed frame formula for the Ricci form,
// specialised to tau-dependent coefficients; returned as a dim x dim matrix.
std::vector<double> ricci_from_frame_formula(const FramePoint& p);

struct CurvatureReport {
  std::vector<double> sec_xy;
  std::vector<double> sec_kx;
  double sec_kt = 0;
  std::vector<double> ricci_xy;  // rho(x_i, y_i)
  double ricci_kt = 0;           // rho(k, t)
  double scalar = 0;
  double ricci_mismatch = 0;  // curvature-trace Ricci vs the frame formula
  bool fd_derived = false;
};

class InconsistentFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurvatureOptions {
  double tol = 1e-8;
  bool cross_check = true;  // throw InconsistentFrame on mismatch
};

CurvatureReport curvature_at(const FramePoint& p, const CurvatureOptions& o = {});
CurvatureReport curvature_at(const FrameStructure& fs, double tau,
                             const CurvatureOptions& o = {});
CurvatureReport curvature_report(const FramePoint& p, const Riemann& rm);

// Q = 2L + sum_j (C_j - H_j + A_j - F_j).
double q_sum(const Coefficients& c);

// max(1, largest |coefficient|). Bracket-level residuals are O(scale * eps)
// in floating point and curvature-level ones O(scale^2 * eps).
double coefficient_scale(const Coefficients& c);

struct SolitonResiduals {
  double skew = 0;  // max over the tau-reduced equations
  // Same residuals divided by max(1, size of the largest summand, counting
  // the summands of Q separately). Near a collapsing orbit the coefficients
  // grow without bound while Q stays small, and only this form is meaningful
  // in floating point.
  double skew_scaled = 0;
  std::vector<std::array<double, 4>> killing;  // per i: f''+Lf', A+E, D+H, B+C+F+G
  double killing_max = 0;
  double identity3 = 0;
  bool unsatisfiable = false;  // some N_i = 0 while lambda != 0
};
SolitonResiduals soliton_residuals(const FramePoint& p);
SolitonResiduals soliton_residuals(const FrameStructure& fs, double tau);

// Directional-derivative data for the frame-dependent soliton system. The
// general system is only evaluated, never solved; tau_dependent() fills the
// values implied by coefficients and potential depending on tau alone.
struct DirectionalData {
  int n = 0;
  std::vector<double> df;     // d_a f, size dim
  std::vector<double> ddf;    // d_a d_b f, dim x dim row-major
  std::vector<double> dL;     // d_a L
  std::vector<double> dCH;    // d_a sum_j (C_j - H_j)
  std::vector<double> dAF;    // d_a sum_j (A_j - F_j)
  static DirectionalData tau_dependent(const FramePoint& p);
};

struct SolEqnsResidual {
  std::vector<double> line1;  // per i
  double line2 = 0;
  std::vector<std::array<double, 4>> lines3to6;  // per i
  double lines7to8 = 0;  // max over i != j
  double max() const;
};
SolEqnsResidual full_sol_eqns(const FramePoint& p, const DirectionalData& d);
double full_sol_eqns_residual(const FramePoint& p);
double full_sol_eqns_residual(const FrameStructure& fs, double tau);

// Independent route: the skew-soliton tensor
//   rho(a,b) + (Hess f(Ja,b) - Hess f(Jb,a))/2 - lambda omega(a,b)
// assembled from the curvature tensor and the connection; max over pairs.
double skew_soliton_tensor_residual(const FramePoint& p);

// Max component of (1/2) L_X g for X = J grad f, from the connection.
double killing_defect(const FramePoint& p);

// Complex structure on frame indices: J e_a = sign * e_{partner}.
std::pair<int, double> apply_j(int a);

}  // namespace solab::frame
