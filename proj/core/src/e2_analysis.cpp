#include <algorithm>
#include <cmath>
#include <limits>

#include "solab/e2_skew.hpp"
#include "solab/quadrature.hpp"

namespace solab::e2 {

namespace {

double abc_length(const E2Trajectory& tr, double t0, double t1) {
  if (t1 <= t0) return 0.0;
  auto f = [&](double t) {
    const auto y = tr.path.interpolate(t);
    return y[0] * y[1] * y[2];
  };
  return numerics::integrate(f, t0, t1, {1e-13, 1e-11, 20000});
}

void require_case3(const E2Trajectory& tr, const char* who) {
  if (tr.classification != Classification::case3_unstable_curve || tr.path.direction() < 0) {
    throw std::invalid_argument(std::string(who) + ": needs a forward case-3 trajectory");
  }
}

}  // namespace

DistanceProfile distance_profile(const E2Trajectory& tr) {
  require_case3(tr, "distance_profile");
  DistanceProfile d;
  const auto& samples = tr.path.samples;
  const double t_start = tr.path.t_begin();
  const double b0 = samples.front().y[1];
  // On the linearised curve abc = q^2 b and b' = q^2 b, so the length from
  // -inf to the first sample is b0.
  auto length_to_b = [&](double b) {
    if (b <= b0) return b;
    return b0 + abc_length(tr, t_start, tr.t_at_b(b));
  };
  d.backward_length = length_to_b(d.b_ref);
  d.tail_below = length_to_b(d.b_tail);
  d.forward_length = abc_length(tr, tr.t_at_b(d.b_lo), tr.t_at_b(d.b_hi));

  d.K2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 2000; ++k) {
    const double b = d.b_lo * std::pow(d.b_hi / d.b_lo, k / 2000.0);
    const double S = 1.0 + b * b + tr.eps.eval(b);
    d.K2 = std::min(d.K2, b * 2.0 * std::sqrt(S) / (S + 1.0));
  }
  d.forward_minorant = d.K2 * std::log(d.b_hi / d.b_lo);

  d.b_p = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : samples) {
    if (s.y[0] / s.y[2] < 1.0 - 1e-6) {
      d.b_p = s.y[1];
      break;
    }
  }
  const double b_last = samples.back().y[1];
  const double q2 = tr.q * tr.q;
  d.K1 = d.K1_last_decade = std::numeric_limits<double>::infinity();
  d.ac_bound_margin = d.ac_literal_margin = std::numeric_limits<double>::infinity();
  d.nullcline_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const E2State st{s.y[0], s.y[1], s.y[2], s.y[3], s.t};
    const double e = tr.eps.eval(st.b);
    d.nullcline_margin =
        std::min(d.nullcline_margin, st.a / st.c - 1.0 / std::sqrt(1.0 + st.b * st.b + e));
    if (!(st.b > d.b_p)) continue;
    const double ratio = vector_field(st, tr.eps)[1] / (st.b * st.b * st.b);
    d.K1 = std::min(d.K1, ratio);
    if (st.b >= 0.1 * b_last) d.K1_last_decade = std::min(d.K1_last_decade, ratio);
    const double ac = st.a * st.c;
    const double bb = 2.0 + st.b * st.b;
    d.ac_bound_margin = std::min(d.ac_bound_margin, ac / (q2 * std::sqrt(0.5 * bb)) - 1.0);
    d.ac_literal_margin = std::min(d.ac_literal_margin, ac / (q2 * std::sqrt(bb)) - 1.0);
  }
  return d;
}

BoltReport bolt_smoothness(const E2Trajectory& tr, double db_dr_tol, double drift_tol) {
  require_case3(tr, "bolt_smoothness");
  BoltReport r;
  {
    const E2State s = tr.state_at(tr.t_at_r(r.r_probe));
    r.db_dr = vector_field(s, tr.eps)[1] / (s.a * s.b * s.c);
  }
  for (std::size_t k = 0; k < r.radii.size(); ++k) {
    const double rad = r.radii[k];
    const double t = tr.t_at_r(rad);
    const auto y = tr.path.interpolate(t);
    const E2State s{y[0], y[1], y[2], y[3], t};
    const double rr = y[4];
    const auto d = vector_field(s, tr.eps);
    r.smooth2[k] = (s.a * s.a - s.c * s.c) / (rr * rr);
    r.kahler[k] = (s.c * rr - s.a * s.b) / (rr * rr * rr);
    r.even_slope[k] = 2.0 * (s.a * d[0] + s.c * d[2]) / (s.a * s.b * s.c) / rr;
  }
  // Drift over the decades 1e-1 -> 1e-2 -> 1e-3.
  auto drift = [](const std::array<double, 4>& v) {
    double m = 0;
    for (int k = 0; k < 2; ++k) m = std::max(m, std::abs(v[k + 1] / v[k] - 1.0));
    return m;
  };
  r.smooth2_drift = drift(r.smooth2);
  r.kahler_drift = drift(r.kahler);
  r.even_drift = drift(r.even_slope);
  r.pass = std::abs(r.db_dr - 1.0) <= db_dr_tol && r.smooth2_drift < drift_tol &&
           r.kahler_drift < drift_tol && r.even_drift < drift_tol;
  return r;
}

}  // namespace solab::e2
