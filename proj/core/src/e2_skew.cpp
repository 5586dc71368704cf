#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "solab/e2_skew.hpp"
#include "solab/frame_families.hpp"

namespace solab::e2 {

EpsilonProfile EpsilonProfile::zero() {
  return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }};
}

EpsilonProfile EpsilonProfile::quadratic_bump() {
  return {"quadratic-bump",
          [](double b) { return b * b * std::exp(-b * b); },
          [](double b) { return 2.0 * b * std::exp(-b * b) * (1.0 - b * b); }};
}

EpsilonProfile EpsilonProfile::poly(double beta) {
  if (!(beta >= 0)) throw InadmissibleProfile("i", "poly profile needs beta >= 0");
  return {"poly", [beta](double b) { return beta * b * b; },
          [beta](double b) { return 2.0 * beta * b; }};
}

EpsilonProfile EpsilonProfile::even_polynomial(std::vector<double> coeffs,
                                               std::string name) {
  auto shared = std::make_shared<const std::vector<double>>(std::move(coeffs));
  auto eval = [shared](double b) {
    const double x = b * b;
    double v = 0;
    for (auto it = shared->rbegin(); it != shared->rend(); ++it) v = v * x + *it;
    return v;
  };
  // d/db sum c_k b^{2k} = sum 2k c_k b^{2k-1}
  auto deriv = [shared](double b) {
    const double x = b * b;
    double v = 0;
    for (std::size_t k = shared->size(); k-- > 1;) v = v * x + 2.0 * k * (*shared)[k];
    return v * b;
  };
  return {std::move(name), eval, deriv};
}

Admissibility check_admissible(const EpsilonProfile& eps, double b_max, int samples) {
  Admissibility r;
  auto fail = [&](const char* item, std::string detail) {
    if (r.admissible) {
      r.admissible = false;
      r.violated_item = item;
      r.detail = std::move(detail);
    }
  };
  const double e0 = eps.eval(0.0), d0 = eps.deriv(0.0);
  if (std::abs(e0) > 1e-14) fail("i", "eps(0) = " + std::to_string(e0));
  if (std::abs(d0) > 1e-12) fail("ii", "eps'(0) = " + std::to_string(d0));
  r.boundary_margin = std::numeric_limits<double>::infinity();
  // Half the points linear on [0, min(1, b_max)], half logarithmic beyond.
  std::vector<double> grid;
  const int half = std::max(2, samples / 2);
  const double lin_hi = std::min(1.0, b_max);
  for (int k = 1; k <= half; ++k) grid.push_back(lin_hi * k / half);
  if (b_max > 1.0) {
    for (int k = 1; k <= half; ++k) grid.push_back(std::pow(b_max, double(k) / half));
  }
  for (double b : grid) {
    const double e = eps.eval(b), d = eps.deriv(b);
    if (!std::isfinite(e) || !std::isfinite(d)) {
      fail("i", "eps not finite at b = " + std::to_string(b));
      continue;
    }
    if (e < -1e-14 * (1.0 + b * b)) fail("i", "eps < 0 at b = " + std::to_string(b));
    if (!(d > -2.0 * b)) fail("ii", "eps'(b) <= -2b at b = " + std::to_string(b));
    r.boundary_margin = std::min(r.boundary_margin, (d + 2.0 * b) / (2.0 * b));
    const double em = eps.eval(-b), dm = eps.deriv(-b);
    if (std::abs(em - e) > 1e-12 * (1.0 + std::abs(e)) ||
        std::abs(dm + d) > 1e-12 * (1.0 + std::abs(d))) {
      fail("iii", "eps not even at b = " + std::to_string(b));
    }
  }
  r.near_boundary = r.boundary_margin < 1e-3;
  return r;
}

void require_admissible(const EpsilonProfile& eps, double b_max) {
  const Admissibility a = check_admissible(eps, b_max);
  if (!a.admissible) {
    throw InadmissibleProfile(a.violated_item, "epsilon profile '" + eps.name +
                                                   "' violates item " + a.violated_item +
                                                   ": " + a.detail);
  }
}

namespace {

void require_state(const E2State& s) {
  if (!(s.a > 0) || !(s.c > 0) || !(s.b >= 0)) {
    throw std::domain_error("e2: need a > 0, c > 0, b >= 0");
  }
}

}  // namespace

std::array<double, 4> vector_field(const E2State& s, const EpsilonProfile& eps) {
  require_state(s);
  const double A = s.a * s.a, B = s.b * s.b, C = s.c * s.c;
  const double e = eps.eval(s.b);
  return {0.5 * s.a * (C - A), 0.5 * s.b * (A + C),
          0.5 * s.c * (A - C + 2.0 * A * B + 2.0 * e * A), 2.0 * e * A};
}

Matrix3 jacobian(const E2State& s, const EpsilonProfile& eps) {
  require_state(s);
  const double a = s.a, b = s.b, c = s.c;
  const double A = a * a, B = b * b, C = c * c;
  const double e = eps.eval(b), de = eps.deriv(b);
  const double P = A - C + 2.0 * A * B + 2.0 * e * A;
  Matrix3 j{};
  j[0] = {0.5 * (C - 3.0 * A), 0.0, a * c};
  j[1] = {a * b, 0.5 * (A + C), b * c};
  j[2] = {c * (a + 2.0 * a * B + 2.0 * e * a), c * (2.0 * A * b + de * A), 0.5 * (P - 2.0 * C)};
  return j;
}

std::array<double, 3> eigenvalues(const Matrix3& m) {
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) e(i, k) = m[i][k];
  Eigen::EigenSolver<Eigen::Matrix3d> es(e, false);
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) r[i] = es.eigenvalues()(i).real();
  std::sort(r.begin(), r.end());
  return r;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::case1: return "case1";
    case Classification::case2: return "case2";
    case Classification::case3_unstable_curve: return "case3-unstable-curve";
    case Classification::ambiguous: return "ambiguous";
  }
  return "ambiguous";
}

double region_residual(const E2State& s, const EpsilonProfile& eps) {
  const double A = s.a * s.a, C = s.c * s.c;
  const double d = C - A;
  const double upper = 2.0 * A * (s.b * s.b + eps.eval(s.b));
  return std::max({0.0, -d, d - upper}) / (A + C);
}

Classification sign_class(const E2State& s, const EpsilonProfile& eps) {
  const double A = s.a * s.a, C = s.c * s.c;
  if (C - A < 0) return Classification::case1;
  if (C - A > 2.0 * A * (s.b * s.b + eps.eval(s.b))) return Classification::case2;
  return Classification::case3_unstable_curve;
}

namespace {

E2State unpack(double t, const numerics::State& y) {
  return {y[0], y[1], y[2], y[3], t};
}

numerics::VectorField field_of(const EpsilonProfile& eps) {
  return [eps](double t, const numerics::State& y, numerics::State& dy) {
    const E2State s = unpack(t, y);
    const auto d = vector_field(s, eps);
    dy[0] = d[0];
    dy[1] = d[1];
    dy[2] = d[2];
    dy[3] = d[3];
    dy[4] = s.a * s.b * s.c;
  };
}

double rel(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

std::vector<numerics::Monitor> product_monitors(const EpsilonProfile& eps) {
  auto with = [eps](auto body) {
    return [eps, body](double t, const numerics::State& y) {
      const E2State s = unpack(t, y);
      const auto d = vector_field(s, eps);
      return body(s, d, eps.eval(s.b));
    };
  };
  using D = std::array<double, 4>;
  return {
      {kMonitorAB, with([](const E2State& s, const D& d, double) {
         return rel(d[0] * s.b + s.a * d[1], s.a * s.b * s.c * s.c);
       })},
      {kMonitorBC, with([](const E2State& s, const D& d, double e) {
         return rel(d[1] * s.c + s.b * d[2],
                    s.b * s.c * s.a * s.a * (1.0 + s.b * s.b + e));
       })},
      {kMonitorAC, with([](const E2State& s, const D& d, double e) {
         return rel(d[0] * s.c + s.a * d[2], s.a * s.a * s.a * s.c * (s.b * s.b + e));
       })},
      {kMonitorAoverB, with([](const E2State& s, const D& d, double) {
         return rel((d[0] * s.b - s.a * d[1]) / (s.b * s.b), -s.a * s.a * s.a / s.b);
       })},
      {kMonitorC2A2, with([](const E2State& s, const D& d, double e) {
         const double A = s.a * s.a, C = s.c * s.c;
         return rel(2.0 * s.c * d[2] - 2.0 * s.a * d[0],
                    -(C - A) * (A + C) + 2.0 * A * C * (s.b * s.b + e));
       })},
      {kMonitorRegion, [eps](double t, const numerics::State& y) {
         return region_residual(unpack(t, y), eps);
       }},
  };
}

void scan_region(E2Trajectory& tr) {
  const auto& ids = tr.path.monitor_ids;
  const std::size_t region =
      std::find(ids.begin(), ids.end(), kMonitorRegion) - ids.begin();
  for (const auto& rec : tr.path.monitor_log) {
    if (rec.monitor == region && rec.residual > tr.region_violation) {
      tr.region_violation = rec.residual;
      tr.region_violation_t = rec.t;
    }
  }
}

// Index i with the component crossing `value` between samples i and i+1.
double crossing_time(const numerics::Trajectory& p, int comp, double value) {
  const auto& s = p.samples;
  if (s.size() < 2) throw std::out_of_range("e2: trajectory too short");
  const bool increasing = s.back().y[comp] > s.front().y[comp];
  auto below = [&](double v) { return increasing ? v < value : v > value; };
  if (below(s.back().y[comp]) || !below(s.front().y[comp])) {
    if (s.front().y[comp] == value) return s.front().t;
    throw std::out_of_range("e2: value not attained along the trajectory");
  }
  std::size_t lo = 0, hi = s.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (below(s[mid].y[comp]) ? lo : hi) = mid;
  }
  double t0 = s[lo].t, t1 = s[hi].t;
  for (int it = 0; it < 200 && t0 != t1; ++it) {
    const double tm = 0.5 * (t0 + t1);
    if (tm == t0 || tm == t1) break;
    (below(p.interpolate(tm)[comp]) ? t0 : t1) = tm;
  }
  return 0.5 * (t0 + t1);
}

}  // namespace

E2State E2Trajectory::state_at(double t) const {
  return unpack(t, path.interpolate(t));
}

double E2Trajectory::t_at_b(double b) const { return crossing_time(path, 1, b); }
double E2Trajectory::t_at_r(double r) const { return crossing_time(path, 4, r); }

E2Trajectory shoot_unstable(double q, const EpsilonProfile& eps, double delta,
                            const numerics::IvpSolver& s, const ShootOptions& o) {
  if (!(q > 0)) throw std::invalid_argument("shoot_unstable: q must be > 0");
  if (!(delta > 0 && delta <= 1e-4 * q)) {
    throw std::invalid_argument("shoot_unstable: need 0 < delta <= 1e-4 q");
  }
  require_admissible(eps, o.b_max);
  E2Trajectory tr;
  tr.eps = eps;
  tr.q = q;
  tr.delta = delta;
  const double b0 = delta * q;
  // On the linearised unstable curve b = b0 exp(q^2 t) and abc = q^2 b, so
  // the length from t = -inf to 0 is b0.
  const numerics::State y0 = {q, b0, q, 0.0, b0};
  const double b_max = o.b_max;
  const std::vector<numerics::StopEvent> events = {
      {"b_max", [b_max](double, const numerics::State& y) { return y[1] - b_max; }}};
  // b grows like exp(q^2 t) and then blows up in finite time; the event stops
  // the run long before the horizon.
  const double horizon = (50.0 + std::log(b_max / b0)) / (q * q) * 10.0;
  tr.path = numerics::solve_ivp(field_of(eps), y0, 0.0, horizon, s, product_monitors(eps), events);
  scan_region(tr);
  if (tr.region_violation > o.region_tol) {
    throw TrajectoryError("shoot_unstable: invariant region violated", tr.region_violation_t,
                          tr.region_violation);
  }
  if (tr.path.termination != numerics::Termination::event) {
    throw TrajectoryError(std::string("shoot_unstable: stopped before b_max (") +
                              numerics::to_string(tr.path.termination) + ")",
                          tr.path.t_end(), tr.path.final_state()[1]);
  }
  tr.classification = Classification::case3_unstable_curve;
  return tr;
}

frame::FramePoint frame_point(const E2State& s, const EpsilonProfile& eps, double lambda) {
  const auto d = vector_field(s, eps);
  const double a = s.a, b = s.b, c = s.c;
  const double A = a * a, B = b * b, C = c * c;
  const double e = eps.eval(b), de = eps.deriv(b);
  const double dA = A * (C - A);
  const double P = A - C + 2.0 * A * B + 2.0 * e * A;
  const double dC = C * P;
  const double dB = B * (A + C);
  const double dP = dA - dC + 2.0 * dA * B + 2.0 * A * dB + 2.0 * de * d[1] * A + 2.0 * e * dA;
  frame::DiagonalJet j;
  j.a = {{a, d[0], 0.5 * d[0] * (C - A) + 0.5 * a * (dC - dA)}};
  j.b = {{b, d[1], 0.5 * d[1] * (A + C) + 0.5 * b * (dA + dC)}};
  j.c = {c, d[2], 0.5 * d[2] * P + 0.5 * c * dP};
  j.f = {s.f, d[3], 2.0 * de * d[1] * A + 2.0 * e * dA};
  j.t = {s.t, 1.0, 0.0};
  return frame::diagonal_frame_point(frame::BianchiConstants::e2(), j, lambda);
}

frame::FramePoint frame_point(const E2Trajectory& traj, double t) {
  frame::FramePoint p = frame_point(traj.state_at(t), traj.eps, -1.0);
  p.tau = std::sqrt(2.0) * traj.path.interpolate(t)[4];
  return p;
}

frame::FrameStructure e2_frame(const E2Trajectory& traj) {
  auto shared = std::make_shared<const E2Trajectory>(traj);
  return frame::FrameStructure(
      1, -1.0,
      [shared](double tau) {
        const double t = shared->t_at_r(tau / std::sqrt(2.0));
        frame::FramePoint p = frame_point(*shared, t);
        p.tau = tau;
        return p;
      },
      "e2");
}

SkewResidualReport skew_soliton_residual(const E2Trajectory& traj, int samples) {
  if (samples < 2) throw std::invalid_argument("skew_soliton_residual: samples >= 2");
  SkewResidualReport r;
  r.samples = samples;
  r.killing_frame = std::numeric_limits<double>::infinity();
  r.killing_coordinate = std::numeric_limits<double>::infinity();
  const double t0 = traj.path.t_begin(), t1 = traj.path.t_end();
  for (int k = 0; k < samples; ++k) {
    const double t = t0 + (t1 - t0) * k / (samples - 1);
    const frame::FramePoint p = frame_point(traj, t);
    const auto res = frame::soliton_residuals(p);
    r.skew = std::max(r.skew, res.skew_scaled);
    r.skew_absolute = std::max(r.skew_absolute, res.skew);
    r.killing_frame = std::min(r.killing_frame, std::abs(res.killing[0][3]));
    const E2State s = traj.state_at(t);
    // Gamma_1z^1 = 1, Gamma_z1^1 = 0.
    r.killing_coordinate = std::min(r.killing_coordinate, s.a * s.a);
  }
  return r;
}

namespace {

// Least-squares fit of y = c0 + c1 x + c2 x^2.
std::array<double, 3> quadratic_fit(const std::vector<double>& x, const std::vector<double>& y) {
  Eigen::MatrixXd m(x.size(), 3);
  Eigen::VectorXd v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m(i, 0) = 1.0;
    m(i, 1) = x[i];
    m(i, 2) = x[i] * x[i];
    v(i) = y[i];
  }
  const Eigen::Vector3d c = m.colPivHouseholderQr().solve(v);
  return {c(0), c(1), c(2)};
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

// Blow-up of component `comp` at the end of a backward run: xi from the
// zero of y/y' (linear in t for a power law), then the exponent from a
// log-log fit over |t - xi| in [10, 1000] times the last distance.
BlowUp fit_blowup(const E2Trajectory& tr, int comp, const char* name) {
  BlowUp b;
  b.variable = name;
  const auto& s = tr.path.samples;
  const std::size_t m = std::min<std::size_t>(20, s.size() - 1);
  std::vector<double> ts, ratio;
  for (std::size_t i = s.size() - m; i < s.size(); ++i) {
    const E2State st = unpack(s[i].t, s[i].y);
    const auto d = vector_field(st, tr.eps);
    ts.push_back(s[i].t - s.back().t);
    ratio.push_back(s[i].y[comp] / d[comp]);
  }
  const auto [icpt, slope] = linear_fit(ts, ratio);
  const double xi = s.back().t - icpt / slope;
  b.xi = xi;
  const double d_last = std::abs(s.back().t - xi);
  const double span = std::abs(s.front().t - xi);
  const double lo = 10.0 * d_last, hi = std::min(1000.0 * d_last, 0.5 * span);
  if (!(hi > lo)) return b;
  std::vector<double> lx, ly;
  const int pts = 40;
  const double dir = tr.path.direction();  // -1: samples sit at xi + d
  for (int k = 0; k < pts; ++k) {
    const double d = lo * std::pow(hi / lo, double(k) / (pts - 1));
    const double t = xi - dir * d;
    lx.push_back(std::log(d));
    ly.push_back(std::log(tr.path.interpolate(t)[comp]));
  }
  b.exponent = linear_fit(lx, ly).second;
  b.fit_points = pts;
  return b;
}

}  // namespace

E2Trajectory classify_cauchy(const E2State& initial, const EpsilonProfile& eps,
                             const numerics::IvpSolver& s, const CauchyOptions& o) {
  require_state(initial);
  if (!(initial.b > 0)) throw std::domain_error("classify_cauchy: need b > 0");
  require_admissible(eps);
  E2Trajectory tr;
  tr.eps = eps;
  const numerics::State y0 = {initial.a, initial.b, initial.c, initial.f, 0.0};
  const double big = o.blowup, b_eq = o.b_equilibrium;
  const std::vector<numerics::StopEvent> events = {
      {"blowup",
       [big](double, const numerics::State& y) {
         return std::max({y[0], y[1], y[2]}) - big;
       }},
      {"equilibrium",
       [eps, b_eq](double t, const numerics::State& y) {
         const bool inside = region_residual(unpack(t, y), eps) <= 1e-6;
         return inside ? y[1] - b_eq : y[1];
       }},
  };
  tr.path = numerics::solve_ivp(field_of(eps), y0, initial.t, initial.t - o.t_span, s,
                                product_monitors(eps), events);
  scan_region(tr);
  const auto& end = tr.path.final_state();
  const auto term = tr.path.termination;
  const bool blew_up = (term == numerics::Termination::event && tr.path.event_id == "blowup") ||
                       term == numerics::Termination::step_underflow ||
                       term == numerics::Termination::non_finite;
  if (blew_up && std::max(end[0], end[2]) > 1e3) {
    if (end[0] > end[2]) {
      tr.classification = Classification::case1;
      tr.blowup = fit_blowup(tr, 0, "a");
    } else {
      tr.classification = Classification::case2;
      tr.blowup = fit_blowup(tr, 2, "c");
    }
    return tr;
  }
  if (term == numerics::Termination::event && tr.path.event_id == "equilibrium") {
    // Fit a and c against b^2 over b in [b_eq, 4 b_eq].
    std::vector<double> x, ya, yc;
    const double t_eq = tr.path.t_end();
    double t_hi = tr.path.t_begin();
    try {
      t_hi = tr.t_at_b(4.0 * b_eq);
    } catch (const std::out_of_range&) {
    }
    for (int k = 0; k <= 40; ++k) {
      const double t = t_eq + (t_hi - t_eq) * k / 40.0;
      const auto y = tr.path.interpolate(t);
      x.push_back(y[1] * y[1]);
      ya.push_back(y[0]);
      yc.push_back(y[2]);
    }
    const double qa = quadratic_fit(x, ya)[0];
    const double qc = quadratic_fit(x, yc)[0];
    if (std::abs(qa - qc) <= 1e-3 * std::max(qa, qc)) {
      tr.classification = Classification::case3_unstable_curve;
      tr.q = 0.5 * (qa + qc);
      return tr;
    }
    tr.note = "a and c extrapolate to different limits at b = 0";
    return tr;
  }
  tr.note = std::string("no signature within the window (") + numerics::to_string(term) + ")";
  return tr;
}

}  // namespace solab::e2
