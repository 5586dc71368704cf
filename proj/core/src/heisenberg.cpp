#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "solab/heisenberg.hpp"
#include "solab/roots.hpp"

namespace solab::heisenberg {

namespace {

void require_phi(double phi, const char* who) {
  if (!(phi > 0)) throw std::domain_error(std::string(who) + ": phi must be > 0");
}

void require_n(int n, int min_n) {
  if (n < min_n || n > kMaxN) throw std::invalid_argument("heisenberg: n out of range");
}

std::uint64_t factorial(int m) {
  std::uint64_t r = 1;
  for (int k = 2; k <= m; ++k) r *= static_cast<std::uint64_t>(k);
  return r;
}

// F_n / phi^{n+1}, which stays O(1) near 0.
double F_over_pow(int n, double phi) {
  const double theta = 1.0 + 0.5 * n;
  if (phi < theta) {
    // 2 sum_{j>=0} (-phi)^j (n+1)!/(n+2+j)!
    double term = 1.0 / (n + 2);
    double sum = term;
    for (int j = 0; j < 400; ++j) {
      term *= -phi / (n + 3 + j);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * sum;
  }
  return F(n, phi) / std::pow(phi, n + 1);
}

}  // namespace

HeisenbergSoliton::HeisenbergSoliton(int n_) : n(n_) { require_n(n_, 1); }

double F(int n, double phi) {
  require_n(n, 0);
  require_phi(phi, "F");
  const double theta = 1.0 + 0.5 * n;
  if (phi < theta) return F_over_pow(n, phi) * std::pow(phi, n + 1);
  // Direct form: sum_{k=0}^{n+1} (-phi)^k (n+1)!/k!, accumulated from the top.
  const double fact = static_cast<double>(factorial(n + 1));
  double term = 1.0;  // (-phi)^{n+1} (n+1)!/(n+1)! without the sign
  double sum = 0;
  for (int k = n + 1; k >= 0; --k) {
    // term = phi^k (n+1)!/k!
    if (k == n + 1) {
      term = std::pow(phi, n + 1);
    } else {
      term *= (k + 1) / phi;
    }
    sum += (k % 2 == 0 ? 1.0 : -1.0) * term;
  }
  const double bracket = sum - fact * std::exp(-phi);
  const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
  return 2.0 * sign * bracket / phi;
}

double F_prime(int n, double phi) {
  const double f = F(n, phi);
  return -((phi + 1.0) / phi) * f + 2.0 * std::pow(phi, n);
}

double F_second(int n, double phi) {
  const double f = F(n, phi);
  const double fp = -((phi + 1.0) / phi) * f + 2.0 * std::pow(phi, n);
  const double lower = n == 0 ? 0.0 : 2.0 * n * std::pow(phi, n - 1);
  return f / (phi * phi) - ((phi + 1.0) / phi) * fp + lower;
}

MetricComponents metric_components(const HeisenbergSoliton& s, double phi) {
  require_phi(phi, "metric_components");
  const double g = F_over_pow(s.n, phi) * phi * phi;  // F_n/phi^{n-1}
  return {phi, g, 1.0 / g};
}

frame::CurvatureReport curvatures(const HeisenbergSoliton& s, double phi) {
  require_phi(phi, "curvatures");
  const int n = s.n;
  const double u = F_over_pow(n, phi);  // F_n/phi^{n+1}
  frame::CurvatureReport r;
  const double sxy = -u;
  const double skx = ((n + 1 + phi) * u - 2.0) / 4.0;
  r.sec_kt = -(0.5 * n * (n + 1) + n * phi + 0.5 * phi * phi) * u + n - 1 + phi;
  const double rxy = 0.5 * (u * phi - 2.0);
  r.ricci_kt = 0.5 * (-(phi + n) * u * phi + 2.0 * phi - 2.0);
  r.sec_xy.assign(n, sxy);
  r.sec_kx.assign(n, skx);
  r.ricci_xy.assign(n, rxy);
  r.scalar = -u * phi * phi + 2.0 * (phi - n - 1);
  return r;
}

HessianComponents hessian_components(const HeisenbergSoliton& s, double phi) {
  const frame::FramePoint p = soliton_frame_point(s, phi);
  return {-p.value.N[0] * p.f1, 2.0 * p.f2};
}

double dim4_determinant_closed_form(double phi) {
  require_phi(phi, "dim4_determinant_closed_form");
  if (phi < 1.0) {
    // 2cosh phi - 2 - phi^2 = sum_{k>=2} 2 phi^{2k}/(2k)!, divided by phi^4.
    double term = 2.0 / 24.0;
    double sum = term;
    const double p2 = phi * phi;
    for (int k = 3; k < 60; ++k) {
      term *= p2 / ((2.0 * k - 1) * (2.0 * k));
      sum += term;
      if (term <= 1e-18 * sum) break;
    }
    return 4.0 * std::exp(-phi) * sum;
  }
  // e^{-phi}(2cosh phi - 2 - phi^2) = 1 + e^{-2phi} - (2 + phi^2) e^{-phi}
  const double e = std::exp(-phi);
  return 4.0 * (1.0 + e * e - (2.0 + phi * phi) * e) / std::pow(phi, 4);
}

Dim4CurvatureOperator dim4_operator(const HeisenbergSoliton& s, double phi) {
  if (s.n != 1) throw std::invalid_argument("dim4_operator: only n = 1");
  require_phi(phi, "dim4_operator");
  const auto cr = curvatures(s, phi);
  Dim4CurvatureOperator d;
  d.phi = phi;
  const double skt = cr.sec_kt, sxy = cr.sec_xy[0], skx = cr.sec_kx[0];
  d.p = 0.5 * (skt + sxy) + 2.0 * skx;
  d.q_mix = 0.5 * (skt - sxy);
  d.r = 2.0 * skx;
  d.determinant = d.p * d.p - 2.0 * d.p * d.r - d.q_mix * d.q_mix;
  d.determinant_identity = dim4_determinant_closed_form(phi);
  if (std::abs(d.determinant - d.determinant_identity) > 1e-10) {
    throw std::runtime_error("dim4_operator: determinant identity violated at phi = " +
                             std::to_string(phi));
  }

  using Mat6 = Eigen::Matrix<double, 6, 6>;
  // Operator on 2-forms from the engine: O[(ij),(kl)] = Rm(i,j,l,k).
  const frame::Riemann rm = frame::riemann_tensor(soliton_frame_point(s, phi));
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  Mat6 op;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      op(a, b) = rm(pairs[a][0], pairs[a][1], pairs[b][1], pairs[b][0]);
  // Columns: (kt+xy), (kx-ty), (ky+tx), (kt-xy), (kx+ty), (ky-tx), all /sqrt2.
  // Pair order kt, kx, ky, tx, ty, xy; t^x is pair (1,2).
  Mat6 basis = Mat6::Zero();
  const double h = 1.0 / std::sqrt(2.0);
  basis(0, 0) = h, basis(5, 0) = h;
  basis(1, 1) = h, basis(4, 1) = -h;
  basis(2, 2) = h, basis(3, 2) = h;
  basis(0, 3) = h, basis(5, 3) = -h;
  basis(1, 4) = h, basis(4, 4) = h;
  basis(2, 5) = h, basis(3, 5) = -h;
  Mat6 m = basis.transpose() * op * basis;
  m = 0.5 * (m + m.transpose()).eval();

  Mat6 model = Mat6::Zero();
  model(0, 0) = d.p;
  model(0, 3) = model(3, 0) = d.q_mix;
  model(3, 3) = d.p - 2.0 * d.r;
  model(4, 4) = model(5, 5) = d.r;
  d.engine_deviation = (m - model).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Mat6> es(m, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 6; ++i) d.eigenvalues[i] = es.eigenvalues()(i);
  const double tr = 2.0 * d.p - 2.0 * d.r;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * d.determinant));
  d.model_eigenvalues = {0.0, 0.0, d.r, d.r, 0.5 * (tr - disc), 0.5 * (tr + disc)};
  std::sort(d.model_eigenvalues.begin(), d.model_eigenvalues.end());
  return d;
}

double sec_decomposable(double phi, double a1, double b1) {
  const auto cr = curvatures(HeisenbergSoliton(1), phi);
  return 0.5 * (a1 + b1) * (a1 + b1) * cr.sec_kt +
         0.5 * (a1 - b1) * (a1 - b1) * cr.sec_xy[0] +
         (1.0 + 2.0 * a1 * a1 - 4.0 * b1 * b1) * cr.sec_kx[0];
}

SecExtremes sec_extremes_dim4(const std::vector<double>& phi_grid,
                              int form_samples, std::uint64_t seed) {
  if (phi_grid.empty() || form_samples < 1) {
    throw std::invalid_argument("sec_extremes_dim4: empty grid or no samples");
  }
  std::mt19937_64 rng(seed);
  const double h = 1.0 / std::sqrt(2.0);
  std::uniform_real_distribution<double> uni(-h, h);
  std::vector<std::pair<double, double>> forms(form_samples);
  for (auto& f : forms) {
    f.first = uni(rng);
    f.second = uni(rng);
  }
  SecExtremes e{std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity(), 0, 0};
  const HeisenbergSoliton s(1);
  for (double phi : phi_grid) {
    const auto cr = curvatures(s, phi);
    for (const auto& [a1, b1] : forms) {
      const double v = 0.5 * (a1 + b1) * (a1 + b1) * cr.sec_kt +
                       0.5 * (a1 - b1) * (a1 - b1) * cr.sec_xy[0] +
                       (1.0 + 2.0 * a1 * a1 - 4.0 * b1 * b1) * cr.sec_kx[0];
      if (v < e.inf) e.inf = v, e.phi_at_inf = phi;
      if (v > e.sup) e.sup = v, e.phi_at_sup = phi;
    }
  }
  return e;
}

namespace {

bool is_limit(double x) { return x == 0 || std::isinf(x); }

DistanceResult improper(const numerics::ScalarFn& f, double from, double toward) {
  numerics::DivergenceOptions o;
  o.cap = 1e6;
  const auto r = numerics::integrate_improper(f, from, toward, {1e-12, 1e-11, 4000}, o);
  return {r.verdict, r.value, r.decay_exponent};
}

// Oriented integral of f from a to b, with either end allowed to be 0 or inf.
DistanceResult oriented(const numerics::ScalarFn& f, double a, double b) {
  if (a == b) return {};
  if (!is_limit(a) && !is_limit(b)) {
    const numerics::Quadrature q{1e-12, 1e-11, 4000};
    const double v = a < b ? numerics::integrate(f, a, b, q) : -numerics::integrate(f, b, a, q);
    return {numerics::Verdict::converges, v, 0};
  }
  if (is_limit(a) && is_limit(b)) {
    DistanceResult left = oriented(f, a, 1.0);
    DistanceResult right = oriented(f, 1.0, b);
    if (left.verdict == numerics::Verdict::diverges) return left;
    if (right.verdict == numerics::Verdict::diverges) return right;
    return {numerics::Verdict::converges, left.value + right.value, 0};
  }
  if (is_limit(b)) return improper(f, a, b);
  DistanceResult r = improper(f, b, a);
  r.value = -r.value;
  return r;
}

}  // namespace

DistanceResult distance(const HeisenbergSoliton& s, double phi0, double phi1) {
  if (phi0 < 0 || phi1 < 0 || std::isnan(phi0) || std::isnan(phi1)) {
    throw std::domain_error("distance: phi must be >= 0");
  }
  const int n = s.n;
  auto f = [n](double phi) { return std::sqrt(1.0 / (F_over_pow(n, phi) * phi * phi)); };
  DistanceResult r = oriented(f, std::min(phi0, phi1), std::max(phi0, phi1));
  return r;
}

DistanceResult gradient_flow_time(const HeisenbergSoliton& s, double phi0,
                                  double phi1) {
  if (!(phi0 > 0) || !(phi1 >= 0)) {
    throw std::domain_error("gradient_flow_time: phi0 must be > 0");
  }
  const int n = s.n;
  auto f = [n](double phi) { return 1.0 / (F_over_pow(n, phi) * phi * phi); };
  return oriented(f, phi0, phi1);
}

double asymptotic_model_deviation(const HeisenbergSoliton& s, AsymptoticEnd end,
                                  double phi) {
  const MetricComponents g = metric_components(s, phi);
  const double model = end == AsymptoticEnd::cone ? 2.0 * phi
                                                  : 2.0 * phi * phi / (s.n + 2);
  return std::max(std::abs(g.g_zeta / model - 1.0), std::abs(model / g.g_zeta - 1.0));
}

QDomain q_domain(const HeisenbergSoliton& s, double phi0, double q0) {
  require_phi(phi0, "q_domain");
  const int n = s.n;
  auto f = [n](double phi) { return 1.0 / F(n, phi); };
  const auto left = improper(f, phi0, 0.0);
  const auto right = improper(f, phi0, std::numeric_limits<double>::infinity());
  QDomain d;
  d.q_a_finite = left.verdict == numerics::Verdict::converges;
  d.q_b_finite = right.verdict == numerics::Verdict::converges;
  d.q_a = d.q_a_finite ? q0 + left.value : -std::numeric_limits<double>::infinity();
  d.q_b = d.q_b_finite ? q0 + right.value : std::numeric_limits<double>::infinity();
  return d;
}

double q_of_phi(const HeisenbergSoliton& s, double phi0, double q0, double phi) {
  require_phi(phi0, "q_of_phi");
  require_phi(phi, "q_of_phi");
  const int n = s.n;
  // Integrate in u = log phi: dq/du = phi / F_n(phi).
  auto f = [n](double u) {
    const double phi = std::exp(u);
    return phi / F(n, phi);
  };
  const double u0 = std::log(phi0), u1 = std::log(phi);
  const numerics::Quadrature q{1e-13, 1e-12, 4000};
  if (u1 == u0) return q0;
  return u1 > u0 ? q0 + numerics::integrate(f, u0, u1, q)
                 : q0 - numerics::integrate(f, u1, u0, q);
}

double phi_of_q(const HeisenbergSoliton& s, double phi0, double q0, double q) {
  const QDomain d = q_domain(s, phi0, q0);
  if (!(q > d.q_a && q < d.q_b)) throw std::out_of_range("phi_of_q: q outside (q_a, q_b)");
  if (q == q0) return phi0;
  const int n = s.n;
  auto g = [&](double u) { return q_of_phi(s, phi0, q0, std::exp(u)) - q; };
  auto dg = [n](double u) {
    const double phi = std::exp(u);
    return phi / F(n, phi);
  };
  const double u = numerics::solve_increasing(g, dg, std::log(phi0), -700.0, 700.0, 0.5, 1e-15);
  return std::exp(u);
}

TypeCheck type_check(const HeisenbergSoliton& s, const std::vector<double>& phi_grid,
                     int plane_samples, std::uint64_t seed) {
  TypeCheck t;
  t.max_frame_sec = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const int dim = frame::dimension(s.n);
  for (double phi : phi_grid) {
    const auto cr = curvatures(s, phi);
    std::vector<double> secs = {cr.sec_kt};
    secs.insert(secs.end(), cr.sec_xy.begin(), cr.sec_xy.end());
    secs.insert(secs.end(), cr.sec_kx.begin(), cr.sec_kx.end());
    for (double v : secs) {
      t.max_frame_sec = std::max(t.max_frame_sec, v);
      t.sup_abs_sec = std::max(t.sup_abs_sec, std::abs(v));
      if (!(v < 0)) t.frame_sec_negative = false;
    }
    if (plane_samples > 0) {
      const frame::Riemann rm = frame::riemann_tensor(soliton_frame_point(s, phi));
      for (int k = 0; k < plane_samples; ++k) {
        std::vector<double> u(dim), v(dim);
        for (auto& x : u) x = gauss(rng);
        for (auto& x : v) x = gauss(rng);
        double uu = 0, uv = 0, vv = 0;
        for (int i = 0; i < dim; ++i) uu += u[i] * u[i];
        for (auto& x : u) x /= std::sqrt(uu);
        for (int i = 0; i < dim; ++i) uv += u[i] * v[i];
        for (int i = 0; i < dim; ++i) v[i] -= uv * u[i];
        for (int i = 0; i < dim; ++i) vv += v[i] * v[i];
        for (auto& x : v) x /= std::sqrt(vv);
        t.sup_abs_sec = std::max(t.sup_abs_sec, std::abs(rm.sectional(u, v)));
      }
    }
  }
  if (s.n == 1 && !phi_grid.empty()) {
    const auto e = sec_extremes_dim4(phi_grid, 10000, seed);
    t.sup_abs_sec = std::max({t.sup_abs_sec, std::abs(e.inf), std::abs(e.sup)});
  }
  t.verdict = std::isfinite(t.sup_abs_sec) ? "bounded" : "unbounded";
  return t;
}

}  // namespace solab::heisenberg
