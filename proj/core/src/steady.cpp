#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "solab/quadrature.hpp"
#include "solab/finite_difference.hpp"
#include "solab/steady.hpp"

namespace solab::steady {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double m_of(const SteadyII& p) { return p.k * p.beta / p.k1; }

// +1 when the interval lies below the boundary, -1 when above.
double side(const SteadyII& p) { return std::isinf(p.t_hi) ? -1.0 : 1.0; }

void require_closed(const SteadyII& p, double t, const char* who) {
  if (!(t >= p.t_lo && t <= p.t_hi) || std::isinf(t)) {
    throw std::domain_error(std::string(who) + ": t = " + std::to_string(t) +
                            " outside the positivity interval");
  }
}

numerics::Quadrature length_quadrature() { return {1e-13, 1e-12, 4000}; }

}  // namespace

const char* to_string(SteadyCase c) {
  switch (c) {
    case SteadyCase::I: return "I";
    case SteadyCase::II: return "II";
    case SteadyCase::both: return "both";
    case SteadyCase::neither: return "neither";
  }
  return "neither";
}

SteadyCase case_split(const frame::FramePoint& p, double tol) {
  if (p.lambda != 0) throw std::invalid_argument("case_split: needs lambda = 0");
  const double q = frame::q_sum(p.value);
  const bool one = std::abs(q - p.f1) <= tol * std::max({1.0, std::abs(q), std::abs(p.f1)});
  bool two = true;
  for (double N : p.value.N) two = two && std::abs(N) <= tol;
  if (one && two) return SteadyCase::both;
  if (one) return SteadyCase::I;
  if (two) return SteadyCase::II;
  return SteadyCase::neither;
}

SteadyCase case_split(const frame::FrameStructure& fs, double tau, double tol) {
  return case_split(fs.at(tau), tol);
}

NoCaseOneSolution::NoCaseOneSolution()
    : std::domain_error(
          "steady case I yields no solutions unless it is a special case of case II: "
          "c0^3 prod a_i^2 sum (Gamma_jj^z)^2 l_j^-2 a_j^-4 would have to vanish") {}

void case_one_frame(const SteadyI&) { throw NoCaseOneSolution(); }

SteadyII make_steady_ii(double k, double beta, double k1, double k2,
                        std::vector<double> ell, std::vector<double> a) {
  if (k1 == 0 || !std::isfinite(k1)) throw std::invalid_argument("steady: k1 must be nonzero");
  if (!(beta > 0) || !std::isfinite(beta)) throw std::invalid_argument("steady: beta must be > 0");
  if (!std::isfinite(k) || !std::isfinite(k2)) throw std::invalid_argument("steady: k, k2 must be finite");
  if (ell.empty()) throw std::invalid_argument("steady: need at least one l_i");
  double ell_prod = 1;
  for (double l : ell) {
    if (!(l > 0)) throw std::invalid_argument("steady: l_i must be > 0");
    ell_prod *= l;
  }
  if (a.empty()) {
    a.assign(ell.size(), std::pow(beta / ell_prod, 0.5 / ell.size()));
  } else {
    if (a.size() != ell.size()) throw std::invalid_argument("steady: a and l differ in length");
    double prod = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] > 0)) throw std::invalid_argument("steady: a_i must be > 0");
      prod *= ell[i] * a[i] * a[i];
    }
    if (std::abs(prod - beta) > 1e-12 * beta) {
      throw std::invalid_argument("steady: beta must equal prod(l_i a_i^2) = " +
                                  std::to_string(prod));
    }
  }
  SteadyII p;
  p.k = k;
  p.beta = beta;
  p.k1 = k1;
  p.k2 = k2;
  p.ell = std::move(ell);
  p.a = std::move(a);
  const double m = m_of(p);
  p.t_lo = -kInf;
  p.t_hi = kInf;
  if (k2 == 0) {
    if (!(m > 0)) throw std::invalid_argument("steady: k2 = 0 needs k beta / k1 > 0");
  } else if (m == 0 || (k2 > 0 && m > 0)) {
    if (!(k2 > 0)) throw std::invalid_argument("steady: c^2 is nowhere positive");
  } else if (k2 < 0 && m < 0) {
    throw std::invalid_argument("steady: c^2 is nowhere positive");
  } else {
    const double ts = std::log(-m / k2) / k1;
    p.boundary = ts;
    // k2 > 0: u > 0 where k1 (t - t*) > 0; k2 < 0: where k1 (t - t*) < 0.
    const bool above = (k2 > 0) == (k1 > 0);
    if (above) p.t_lo = ts;
    else p.t_hi = ts;
  }
  return p;
}

double u_of_t(const SteadyII& p, double t) {
  if (p.boundary) return -m_of(p) * std::expm1(p.k1 * (t - *p.boundary));
  if (p.k2 == 0) return m_of(p);
  return p.k2 * std::exp(p.k1 * t) + m_of(p);
}

double c_of_t(const SteadyII& p, double t) {
  if (!p.contains(t)) {
    throw std::domain_error("c_of_t: t = " + std::to_string(t) +
                            " outside the positivity interval");
  }
  return 1.0 / std::sqrt(u_of_t(p, t));
}

// u' = k1 (u - m), u'' = k1^2 (u - m).
double c_prime(const SteadyII& p, double t) {
  const double u = u_of_t(p, t);
  const double du = p.k1 * (u - m_of(p));
  return -0.5 * du * c_of_t(p, t) / u;
}

double c_second(const SteadyII& p, double t) {
  const double u = u_of_t(p, t);
  const double du = p.k1 * (u - m_of(p));
  const double ddu = p.k1 * du;
  const double c = c_of_t(p, t);
  return c / u * (0.75 * du * du / u - 0.5 * ddu);
}

double ii_simple_residual_fd(const SteadyII& p, double t) {
  const double c = c_of_t(p, t);
  double h = 1e-3 / std::max(1.0, std::abs(p.k1));
  if (p.boundary) h = std::min(h, 0.05 * std::abs(t - *p.boundary));
  auto f = [&](double s) { return c_of_t(p, s); };
  // One Richardson step on the central differences: O(h^4).
  auto rich = [&](int order) {
    return (4.0 * numerics::fd_derivative(f, t, order, 0.5 * h) -
            numerics::fd_derivative(f, t, order, h)) / 3.0;
  };
  const double d1 = rich(1), d2 = rich(2);
  return p.k * p.beta * d1 + d1 * d1 / (c * c * c) - d2 / (c * c);
}

namespace {

// 2 sqrt(beta/(k k1)) atanh(g) with 1 - g^2 = exp(k1 (t - t*)).
double closed_form_primitive(const SteadyII& p, double t) {
  const double x = p.k1 * (t - *p.boundary);
  const double g = std::sqrt(-std::expm1(x));
  // atanh(g) = log((1 + g) / sqrt(1 - g^2))
  return 2.0 * std::sqrt(p.beta / (p.k * p.k1)) * (std::log1p(g) - 0.5 * x);
}

}  // namespace

double normal_geodesic_length(const SteadyII& p, double t0, double t1) {
  if (!p.closed_form_length_admissible() || !p.boundary) {
    throw std::domain_error(
        "normal_geodesic_length: the tanh^-1 argument leaves (0, 1); needs k k1 > 0 and k2 < 0");
  }
  require_closed(p, t0, "normal_geodesic_length");
  require_closed(p, t1, "normal_geodesic_length");
  return std::abs(closed_form_primitive(p, t1) - closed_form_primitive(p, t0));
}

double normal_geodesic_length_quadrature(const SteadyII& p, double t0, double t1) {
  require_closed(p, t0, "normal_geodesic_length_quadrature");
  require_closed(p, t1, "normal_geodesic_length_quadrature");
  if (t0 > t1) std::swap(t0, t1);
  if (t0 == t1) return 0.0;
  if (!p.boundary) {
    return numerics::integrate([&](double t) { return p.beta * c_of_t(p, t); }, t0, t1,
                               length_quadrature());
  }
  // t = t* - sigma s^2, dt = -2 sigma s ds; c s stays bounded as s -> 0.
  const double ts = *p.boundary, sigma = side(p);
  const double m = m_of(p);
  auto integrand = [&](double s) {
    const double u = -m * std::expm1(-p.k1 * sigma * s * s);
    return 2.0 * p.beta * s / std::sqrt(u);
  };
  const double s0 = std::sqrt(std::abs(ts - t0)), s1 = std::sqrt(std::abs(ts - t1));
  return numerics::integrate(integrand, std::min(s0, s1), std::max(s0, s1),
                             length_quadrature());
}

IncompletenessReport incompleteness_verdict(const SteadyII& p) {
  IncompletenessReport r;
  r.t_ref = p.boundary ? *p.boundary - side(p) / std::abs(p.k1) : 0.0;
  auto end = [&](double limit) {
    EndReport e;
    e.t_limit = limit;
    e.closed_form = kNaN;
    if (std::isfinite(limit)) {
      e.finite = true;
      e.length = normal_geodesic_length_quadrature(p, r.t_ref, limit);
      if (p.closed_form_length_admissible()) {
        e.closed_form = normal_geodesic_length(p, r.t_ref, limit);
      }
      return e;
    }
    auto f = [&](double t) { return p.beta * c_of_t(p, t); };
    const auto imp = numerics::integrate_improper(f, r.t_ref, limit, length_quadrature());
    e.finite = imp.verdict == numerics::Verdict::converges;
    e.length = std::abs(imp.value);
    return e;
  };
  r.lower = end(p.t_lo);
  r.upper = end(p.t_hi);
  r.verdict = r.lower.finite || r.upper.finite ? "incomplete" : "no blow-up in window";
  r.note = "orbit-normal geodesics only; metrics with a singular orbit attached are not evaluated";
  return r;
}

std::vector<ProfileRow> profile(const SteadyII& p, double t0, double t1, int samples) {
  if (samples < 2) throw std::invalid_argument("profile: need at least 2 samples");
  if (!p.contains(t0) || !p.contains(t1)) {
    throw std::domain_error("profile: endpoints must lie inside the positivity interval");
  }
  const bool closed = p.closed_form_length_admissible() && p.boundary;
  std::vector<ProfileRow> rows;
  rows.reserve(samples);
  double length = 0, prev = t0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    if (i > 0) {
      length += closed ? normal_geodesic_length(p, prev, t)
                       : normal_geodesic_length_quadrature(p, prev, t);
    }
    rows.push_back({t, c_of_t(p, t), length});
    prev = t;
  }
  return rows;
}

frame::BianchiConstants bianchi_constants(const SteadyII& p) {
  frame::BianchiConstants g;
  for (double l : p.ell) {
    g.gamma_iiz.push_back(0.0);
    g.gamma_izi.push_back(l * l);
    g.gamma_zii.push_back(1.0);
  }
  return g;
}

frame::FramePoint frame_point(const SteadyII& p, double t) {
  const double c = c_of_t(p, t), dc = c_prime(p, t), ddc = c_second(p, t);
  frame::DiagonalJet j;
  for (int i = 0; i < p.n(); ++i) {
    j.a.push_back({p.a[i], 0.0, 0.0});
    j.b.push_back({p.ell[i] * p.a[i], 0.0, 0.0});
  }
  j.c = {c, dc, ddc};
  j.t = {t, 1.0, 0.0};
  // f' = k alpha c = k beta c^2
  j.f = {0.0, p.k * p.beta * c * c, 2.0 * p.k * p.beta * c * dc};
  return frame::diagonal_frame_point(bianchi_constants(p), j, 0.0);
}

frame::FrameStructure steady_frame(const SteadyII& p, double t_ref) {
  auto shared = std::make_shared<const SteadyII>(p);
  frame::ChartedFamily fam(
      [shared](double t) { return frame_point(*shared, t); },
      [shared](double t) { return std::sqrt(2.0) * shared->beta * c_of_t(*shared, t); },
      p.t_lo, p.t_hi, t_ref, false);
  return fam.structure(p.n(), 0.0, "steady-II");
}

frame::FrameStructure steady_frame(const SteadyII& p) {
  return steady_frame(p, p.boundary ? *p.boundary - side(p) / std::abs(p.k1) : 0.0);
}

}  // namespace solab::steady
