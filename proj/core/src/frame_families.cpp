#include <cmath>
#include <memory>
#include <stdexcept>

#include "solab/frame_families.hpp"
#include "solab/quadrature.hpp"
#include "solab/roots.hpp"

namespace solab::frame {

BianchiConstants BianchiConstants::heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("heisenberg constants: n >= 1");
  return {std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
          std::vector<double>(n, 0.0)};
}

BianchiConstants BianchiConstants::e2() { return {{1.0}, {1.0}, {0.0}}; }

namespace {

// Logarithmic derivative u_s/u and its s-derivative.
struct LogJet {
  double l, ls;
};

LogJet log_jet(const Jet& u) {
  if (!(u.v > 0)) throw std::domain_error("diagonal frame: metric functions must be positive");
  const double l = u.d1 / u.v;
  return {l, u.d2 / u.v - l * l};
}

}  // namespace

double dtau_ds(const DiagonalJet& j) {
  double alpha = j.c.v;
  for (std::size_t i = 0; i < j.a.size(); ++i) alpha *= j.a[i].v * j.b[i].v;
  return std::sqrt(2.0) * alpha * j.t.d1;
}

FramePoint diagonal_frame_point(const BianchiConstants& g, const DiagonalJet& j,
                                double lambda, double tau) {
  const int n = g.n();
  if (static_cast<int>(j.a.size()) != n || static_cast<int>(j.b.size()) != n) {
    throw std::invalid_argument("diagonal frame: jet size does not match n");
  }
  if (j.t.d1 == 0) throw std::invalid_argument("diagonal frame: dt/ds = 0");
  const double rt2 = std::sqrt(2.0);
  std::vector<LogJet> la(n), lb(n);
  double log_alpha_s = 0;
  for (int i = 0; i < n; ++i) {
    la[i] = log_jet(j.a[i]);
    lb[i] = log_jet(j.b[i]);
    log_alpha_s += la[i].l + lb[i].l;
  }
  const LogJet lc = log_jet(j.c);
  log_alpha_s += lc.l;

  const double w = 1.0 / dtau_ds(j);
  const double ws = -w * (log_alpha_s + j.t.d2 / j.t.d1);

  FramePoint p(n);
  p.tau = tau;
  p.lambda = lambda;
  auto& v = p.value;
  auto& d = p.deriv;
  for (int i = 0; i < n; ++i) {
    const double a = j.a[i].v, b = j.b[i].v, c = j.c.v;
    v.A[i] = -w * la[i].l;
    d.A[i] = -w * (ws * la[i].l + w * la[i].ls);
    v.D[i] = -w * lb[i].l;
    d.D[i] = -w * (ws * lb[i].l + w * lb[i].ls);
    v.E[i] = -v.A[i];
    d.E[i] = -d.A[i];
    v.H[i] = -v.D[i];
    d.H[i] = -d.D[i];
    v.B[i] = -g.gamma_zii[i] * b / (rt2 * c * a);
    d.B[i] = w * v.B[i] * (lb[i].l - lc.l - la[i].l);
    v.F[i] = v.B[i];
    d.F[i] = d.B[i];
    v.C[i] = g.gamma_izi[i] * a / (rt2 * c * b);
    d.C[i] = w * v.C[i] * (la[i].l - lc.l - lb[i].l);
    v.G[i] = v.C[i];
    d.G[i] = d.C[i];
    v.N[i] = -g.gamma_iiz[i] * c / (rt2 * a * b);
    d.N[i] = w * v.N[i] * (lc.l - la[i].l - lb[i].l);
  }
  v.L = -w * lc.l;
  d.L = -w * (ws * lc.l + w * lc.ls);
  p.f1 = w * j.f.d1;
  p.f2 = w * (ws * j.f.d1 + w * j.f.d2);
  return p;
}

ChartedFamily::ChartedFamily(PointFn point, RateFn rate, double s_lo,
                             double s_hi, double s_ref, bool log_chart)
    : point_(std::move(point)),
      rate_(std::move(rate)),
      lo_(s_lo),
      hi_(s_hi),
      ref_(s_ref),
      log_(log_chart) {
  if (!(s_lo < s_ref && s_ref < s_hi)) {
    throw std::invalid_argument("charted family: need s_lo < s_ref < s_hi");
  }
  if (log_chart && !(s_lo >= 0)) {
    throw std::invalid_argument("charted family: log chart needs s > 0");
  }
}

double ChartedFamily::tau_of(double s) const {
  if (!(s > lo_ && s < hi_)) throw std::out_of_range("charted family: s outside chart");
  if (s == ref_) return 0.0;
  numerics::Quadrature q{1e-13, 1e-12, 4000};
  if (log_) {
    // Integrate in u = log s.
    auto f = [&](double u) {
      const double x = std::exp(u);
      return x * rate_(x);
    };
    const double u0 = std::log(ref_), u1 = std::log(s);
    return u1 > u0 ? numerics::integrate(f, u0, u1, q)
                   : -numerics::integrate(f, u1, u0, q);
  }
  return s > ref_ ? numerics::integrate(rate_, ref_, s, q)
                  : -numerics::integrate(rate_, s, ref_, q);
}

double ChartedFamily::s_of(double tau) const {
  if (tau == 0) return ref_;
  // Solve in u = log s for the log chart and u = s otherwise.
  auto to_s = [&](double u) { return log_ ? std::exp(u) : u; };
  auto g = [&](double u) { return tau_of(to_s(u)) - tau; };
  auto dg = [&](double u) {
    const double s = to_s(u);
    return log_ ? s * rate_(s) : rate_(s);
  };
  const double u_ref = log_ ? std::log(ref_) : ref_;
  const double u_lo = log_ ? (lo_ > 0 ? std::log(lo_) : -745.0)
                          : (std::isinf(lo_) ? -1e300 : lo_);
  const double u_hi = std::isinf(hi_) ? (log_ ? 709.0 : 1e300)
                                      : (log_ ? std::log(hi_) : hi_);
  const bool bounded = std::isfinite(lo_) && std::isfinite(hi_);
  const double step = log_ ? 0.5 : (bounded ? 0.01 * (hi_ - lo_) : 0.1);
  try {
    return to_s(numerics::solve_increasing(g, dg, u_ref, u_lo, u_hi, step, 1e-15));
  } catch (const std::out_of_range&) {
    throw std::out_of_range("charted family: tau beyond chart");
  }
}

FramePoint ChartedFamily::at_s(double s) const {
  FramePoint p = point_(s);
  p.tau = tau_of(s);
  return p;
}

FramePoint ChartedFamily::at_tau(double tau) const {
  FramePoint p = point_(s_of(tau));
  p.tau = tau;
  return p;
}

FrameStructure ChartedFamily::structure(int n, double lambda,
                                        std::string name) const {
  auto self = std::make_shared<const ChartedFamily>(*this);
  return FrameStructure(
      n, lambda, [self](double tau) { return self->at_tau(tau); },
      std::move(name));
}

}  // namespace solab::frame
