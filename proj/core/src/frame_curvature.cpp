#include <algorithm>
#include <cmath>

#include "solab/frame.hpp"

namespace solab::frame {

double Riemann::ricci(int b, int c) const {
  double r = 0;
  for (int a = 0; a < dim_; ++a) r += (*this)(a, b, c, a);
  return r;
}

double Riemann::sectional(const std::vector<double>& u,
                          const std::vector<double>& v) const {
  double s = 0;
  for (int a = 0; a < dim_; ++a) {
    if (u[a] == 0) continue;
    for (int b = 0; b < dim_; ++b) {
      if (v[b] == 0) continue;
      for (int c = 0; c < dim_; ++c) {
        if (v[c] == 0) continue;
        for (int d = 0; d < dim_; ++d) {
          s += (*this)(a, b, c, d) * u[a] * v[b] * v[c] * u[d];
        }
      }
    }
  }
  return s;
}

// Curvature 2-forms evaluated on frame pairs: with connection coefficients
// gamma(a,b,c) = <nabla_a e_b, e_c> depending on tau only, the directional
// derivative e_a(gamma) is gamma' * e_a(tau).
Riemann riemann_tensor(const FramePoint& p) {
  const Connection conn = koszul_connection(p);
  const Table3& g = conn.gamma;
  const Table3& dg = conn.gamma_deriv;
  const Table3 s = structure_constants(p.value);
  const int dim = g.dim();
  Riemann rm(dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      if (a == b) continue;
      for (int c = 0; c < dim; ++c) {
        for (int d = 0; d < dim; ++d) {
          double v = dtau(a) * dg(b, c, d) - dtau(b) * dg(a, c, d);
          for (int e = 0; e < dim; ++e) {
            v += g(b, c, e) * g(a, e, d) - g(a, c, e) * g(b, e, d);
            v -= s(a, b, e) * g(e, c, d);
          }
          rm(a, b, c, d) = v;
        }
      }
    }
  }
  return rm;
}

std::vector<double> ricci_from_frame_formula(const FramePoint& p) {
  const auto& v = p.value;
  const auto& d = p.deriv;
  const int n = v.n();
  const int dim = dimension(n);
  const double q = q_sum(v);
  double dq = 0;
  for (int j = 0; j < n; ++j) dq += d.C[j] - d.H[j] + d.A[j] - d.F[j];
  // Ricci form rho as an antisymmetric matrix.
  std::vector<double> rho(std::size_t(dim) * dim, 0.0);
  auto set = [&](int a, int b, double x) {
    rho[std::size_t(a) * dim + b] = x;
    rho[std::size_t(b) * dim + a] = -x;
  };
  set(kK, kT, -v.L * q + 2 * d.L + dq);
  for (int i = 1; i <= n; ++i) set(x_index(i), y_index(i), -v.N[i - 1] * q);
  // rho(X,Y) = Ric(JX,Y)  =>  Ric(a,b) = -rho(J e_a, e_b).
  std::vector<double> ric(std::size_t(dim) * dim, 0.0);
  for (int a = 0; a < dim; ++a) {
    const auto [ja, sign] = apply_j(a);
    for (int b = 0; b < dim; ++b) {
      ric[std::size_t(a) * dim + b] = -sign * rho[std::size_t(ja) * dim + b];
    }
  }
  return ric;
}

CurvatureReport curvature_report(const FramePoint& p, const Riemann& rm) {
  const int n = p.n();
  const int dim = dimension(n);
  CurvatureReport r;
  r.fd_derived = p.fd_derived;
  r.sec_kt = rm.sectional(kK, kT);
  r.ricci_kt = rm.ricci(kT, kT);
  for (int i = 1; i <= n; ++i) {
    r.sec_xy.push_back(rm.sectional(x_index(i), y_index(i)));
    r.sec_kx.push_back(rm.sectional(kK, x_index(i)));
    r.ricci_xy.push_back(rm.ricci(y_index(i), y_index(i)));
  }
  for (int a = 0; a < dim; ++a) r.scalar += rm.ricci(a, a);
  const auto frame_ric = ricci_from_frame_formula(p);
  double scale = 1.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) scale = std::max(scale, std::abs(rm.ricci(a, b)));
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const double diff = std::abs(rm.ricci(a, b) - frame_ric[std::size_t(a) * dim + b]);
      r.ricci_mismatch = std::max(r.ricci_mismatch, diff / scale);
    }
  }
  return r;
}

CurvatureReport curvature_at(const FramePoint& p, const CurvatureOptions& o) {
  CurvatureReport r = curvature_report(p, riemann_tensor(p));
  if (o.cross_check && r.ricci_mismatch > o.tol) {
    throw InconsistentFrame(
        "curvature_at: Ricci from the curvature trace and from the frame "
        "formula disagree by " +
        std::to_string(r.ricci_mismatch) + " at tau = " + std::to_string(p.tau));
  }
  return r;
}

CurvatureReport curvature_at(const FrameStructure& fs, double tau,
                             const CurvatureOptions& o) {
  return curvature_at(fs.at(tau), o);
}

double skew_soliton_tensor_residual(const FramePoint& p) {
  const int dim = dimension(p.n());
  const Connection conn = koszul_connection(p);
  const Riemann rm = riemann_tensor(p);
  const auto d = DirectionalData::tau_dependent(p);
  auto hess = [&](int a, int b) {
    double h = d.ddf[std::size_t(a) * dim + b];
    for (int c = 0; c < dim; ++c) h -= conn.gamma(a, b, c) * d.df[c];
    return h;
  };
  double worst = 0;
  for (int a = 0; a < dim; ++a) {
    const auto [ja, sa] = apply_j(a);
    for (int b = a + 1; b < dim; ++b) {
      const auto [jb, sb] = apply_j(b);
      const double rho = sa * rm.ricci(ja, b);
      const double om = (ja == b) ? sa : 0.0;
      const double lhs = rho + 0.5 * (sa * hess(ja, b) - sb * hess(jb, a));
      worst = std::max(worst, std::abs(lhs - p.lambda * om));
    }
  }
  return worst;
}

double killing_defect(const FramePoint& p) {
  const int dim = dimension(p.n());
  const Connection conn = koszul_connection(p);
  // X = f'(tau)(k + t); <nabla_a X, b>.
  auto nabla_x = [&](int a, int b) {
    double v = p.f2 * dtau(a) * ((b == kK || b == kT) ? 1.0 : 0.0);
    v += p.f1 * (conn.gamma(a, kK, b) + conn.gamma(a, kT, b));
    return v;
  };
  double worst = 0;
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b)
      worst = std::max(worst, std::abs(0.5 * (nabla_x(a, b) + nabla_x(b, a))));
  return worst;
}

}  // namespace solab::frame
