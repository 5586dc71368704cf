#pragma once

#include <functional>
#include <string>
#include <vector>

#include "solab/frame.hpp"

namespace solab::frame {

// Value and first two derivatives with respect to some chart parameter s.
struct Jet {
  double v = 0;
  double d1 = 0;
  double d2 = 0;
};

// Structure constants of a Lie algebra with repeated Bianchi type A blocks:
// [X_i,Y_i] = -gamma_iiz Z, [Y_i,Z] = -gamma_izi X_i, [Z,X_i] = -gamma_zii Y_i.
struct BianchiConstants {
  std::vector<double> gamma_iiz;
  std::vector<double> gamma_izi;
  std::vector<double> gamma_zii;
  int n() const { return static_cast<int>(gamma_iiz.size()); }

  static BianchiConstants heisenberg(int n);
  static BianchiConstants e2();
};

// Diagonal cohomogeneity-one metric
//   alpha^2 dt^2 + c^2 zeta^2 + sum_i (a_i^2 sigma_i^2 + b_i^2 rho_i^2),
// alpha = prod(a_i b_i) c, described by jets in a chart parameter s. The jet
// `t` is the orbit-normal parameter t as a function of s (use {s, 1, 0} when
// s = t) and `f` the soliton potential.
struct DiagonalJet {
  std::vector<Jet> a, b;
  Jet c, f, t;
};

// Frame coefficients of the orthonormal frame k = (Z/c + d_t/alpha)/sqrt2,
// t = (Z/c - d_t/alpha)/sqrt2, x_i = X_i/a_i, y_i = Y_i/b_i, with their
// tau-derivatives through d/dtau = (sqrt2 alpha dt/ds)^{-1} d/ds.
FramePoint diagonal_frame_point(const BianchiConstants& g, const DiagonalJet& j,
                                double lambda, double tau = 0);

// d tau / ds = sqrt2 * alpha * dt/ds.
double dtau_ds(const DiagonalJet& j);

// A family of frame points indexed by a chart parameter s, with tau recovered
// by quadrature of dtau/ds from a reference point (tau(s_ref) = 0) and
// inverted by bracketed Newton iteration. With log_chart the iteration runs in
// log s, which suits parameters on (0, inf).
class ChartedFamily {
 public:
  using PointFn = std::function<FramePoint(double s)>;
  using RateFn = std::function<double(double s)>;

  ChartedFamily(PointFn point, RateFn rate, double s_lo, double s_hi,
                double s_ref, bool log_chart);

  double tau_of(double s) const;
  double s_of(double tau) const;
  FramePoint at_tau(double tau) const;
  FramePoint at_s(double s) const;
  FrameStructure structure(int n, double lambda, std::string name) const;

 private:
  PointFn point_;
  RateFn rate_;
  double lo_, hi_, ref_;
  bool log_;
};

}  // namespace solab::frame
