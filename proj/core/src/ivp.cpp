#include "solab/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solab::numerics {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett, Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

bool all_finite(const State& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

State eval_segment(const Trajectory::Segment& s, double t) {
  const double th = (t - s.t0) / s.h;
  const double th1 = 1.0 - th;
  const auto& r = s.coeffs;
  State y(r[0].size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = r[0][i] +
           th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
  }
  return y;
}

State eval_segment_derivative(const Trajectory::Segment& s, double t) {
  const double th = (t - s.t0) / s.h;
  const double th1 = 1.0 - th;
  const auto& r = s.coeffs;
  State dy(r[0].size());
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const double u = r[3][i] + th1 * r[4][i];
    const double du = -r[4][i];
    const double v = r[2][i] + th * u;
    const double dv = u + th * du;
    const double w = r[1][i] + th1 * v;
    const double dw = -v + th1 * dv;
    dy[i] = (w + th * dw) / s.h;
  }
  return dy;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_end: return "reached_end";
    case Termination::event: return "event";
    case Termination::step_underflow: return "step_underflow";
    case Termination::non_finite: return "non_finite";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

double Trajectory::direction() const {
  if (samples.size() < 2) return 1.0;
  return samples.back().t >= samples.front().t ? 1.0 : -1.0;
}

const Trajectory::Segment& Trajectory::locate(double t) const {
  if (segments_.empty()) throw std::out_of_range("trajectory has no steps");
  const double dir = direction();
  // Segments are ordered along the direction of integration.
  auto it = std::partition_point(
      segments_.begin(), segments_.end(),
      [&](const Segment& s) { return dir * (s.t0 + s.h - t) < 0; });
  if (it == segments_.end()) {
    const Segment& last = segments_.back();
    if (std::abs(t - (last.t0 + last.h)) <= 1e-12 * std::max(1.0, std::abs(t)))
      return last;
    throw std::out_of_range("interpolation point outside trajectory");
  }
  if (dir * (t - it->t0) < -1e-12 * std::max(1.0, std::abs(t))) {
    throw std::out_of_range("interpolation point outside trajectory");
  }
  return *it;
}

State Trajectory::interpolate(double t) const {
  return eval_segment(locate(t), t);
}

State Trajectory::interpolate_derivative(double t) const {
  return eval_segment_derivative(locate(t), t);
}

double Trajectory::max_residual(const std::string& id) const {
  const auto it = std::find(monitor_ids.begin(), monitor_ids.end(), id);
  if (it == monitor_ids.end()) throw std::out_of_range("unknown monitor " + id);
  const auto idx = static_cast<std::size_t>(it - monitor_ids.begin());
  double m = 0;
  for (const auto& r : monitor_log) {
    if (r.monitor == idx) m = std::max(m, std::abs(r.residual));
  }
  return m;
}

double Trajectory::max_residual() const {
  double m = 0;
  for (const auto& r : monitor_log) m = std::max(m, std::abs(r.residual));
  return m;
}

Trajectory solve_ivp(const VectorField& field, const State& y0, double t0,
                     double t1, const IvpSolver& s,
                     const std::vector<Monitor>& monitors,
                     const std::vector<StopEvent>& events) {
  if (t0 == t1 || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw std::invalid_argument("solve_ivp: need finite t0 != t1");
  }
  if (!(s.abs_tol > 0) || !(s.rel_tol > 0) || !(s.max_step > 0) ||
      !(s.dense_stride > 0)) {
    throw std::invalid_argument("solve_ivp: tolerances and steps must be > 0");
  }
  const std::size_t n = y0.size();
  const double dir = t1 > t0 ? 1.0 : -1.0;

  Trajectory traj;
  for (const auto& m : monitors) traj.monitor_ids.push_back(m.id);

  auto f = [&](double t, const State& y, State& dy) {
    dy.assign(n, 0.0);
    field(t, y, dy);
    ++traj.evaluations;
  };

  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n);
  f(t0, y0, k1);
  if (!all_finite(k1) || !all_finite(y0)) {
    throw std::invalid_argument("solve_ivp: field not finite at (t0, y0)");
  }

  auto log_monitors = [&](double t, const State& y) {
    for (std::size_t i = 0; i < monitors.size(); ++i) {
      traj.monitor_log.push_back({t, i, monitors[i].residual(t, y)});
    }
  };

  auto err_scale = [&](std::size_t i, const State& a, const State& b) {
    return s.abs_tol + s.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
  };

  // Initial step (Hairer's heuristic).
  double h = s.initial_step;
  if (h <= 0) {
    double dnf = 0, dny = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = s.abs_tol + s.rel_tol * std::abs(y0[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y0[i] / sk) * (y0[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min({h, s.max_step, std::abs(t1 - t0)});
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + dir * h * k1[i];
    f(t0 + dir * h, tmp, k2);
    double der2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = s.abs_tol + s.rel_tol * std::abs(y0[i]);
      const double d = (k2[i] - k1[i]) / sk;
      der2 += d * d;
    }
    der2 = std::sqrt(der2 / std::max<std::size_t>(n, 1)) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf / std::max<std::size_t>(n, 1)));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    h = std::min({100 * h, h1, s.max_step, std::abs(t1 - t0)});
  }

  State y = y0;
  double t = t0;
  traj.samples.push_back({t, y});
  log_monitors(t, y);
  std::vector<double> g_prev;
  for (const auto& e : events) g_prev.push_back(e.g(t, y));

  constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0, beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  double facold = 1e-4;
  bool last_rejected = false;
  double last_sample_t = t;

  while (true) {
    if (traj.accepted_steps + traj.rejected_steps >= s.max_steps) {
      traj.termination = Termination::max_steps;
      break;
    }
    bool final_step = false;
    if (dir * (t + dir * h - t1) >= 0) {
      h = std::abs(t1 - t);
      final_step = true;
    }
    const double min_h =
        std::max(s.min_step, 4 * std::numeric_limits<double>::epsilon() * std::abs(t));
    if (h < min_h) {
      traj.termination = Termination::step_underflow;
      break;
    }
    const double hs = dir * h;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    f(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    f(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                           a75 * k5[i] + a76 * k6[i]);
    f(t + hs, y1, k7);

    bool finite = all_finite(y1) && all_finite(k7) && all_finite(k2) &&
                  all_finite(k3) && all_finite(k4) && all_finite(k5) &&
                  all_finite(k6);
    double err = 0;
    if (finite) {
      for (std::size_t i = 0; i < n; ++i) {
        const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double r = e / err_scale(i, y, y1);
        err += r * r;
      }
      err = std::sqrt(err / std::max<std::size_t>(n, 1));
      finite = std::isfinite(err);
    }
    if (!finite) {
      // Shrink hard; if the field itself is non-finite the step underflows
      // and the run ends with the last good state.
      h *= 0.1;
      ++traj.rejected_steps;
      last_rejected = true;
      if (h < min_h) {
        traj.termination = Termination::non_finite;
        break;
      }
      continue;
    }

    const double fac11 = std::pow(std::max(err, 1e-300), expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
    double hnew = h / fac;

    if (err > 1.0) {
      h /= std::min(1.0 / fac_min, fac11 / safety);
      ++traj.rejected_steps;
      last_rejected = true;
      continue;
    }

    // Accepted step.
    facold = std::max(err, 1e-4);
    ++traj.accepted_steps;
    Trajectory::Segment seg{t, hs, std::vector<State>(5, State(n))};
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = hs * k1[i] - ydiff;
      seg.coeffs[0][i] = y[i];
      seg.coeffs[1][i] = ydiff;
      seg.coeffs[2][i] = bspl;
      seg.coeffs[3][i] = ydiff - hs * k7[i] - bspl;
      seg.coeffs[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                               d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    const double t_new = final_step ? t1 : t + hs;

    // Event detection on the accepted step.
    int fired = -1;
    double t_event = t_new;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double g_new = events[e].g(t_new, y1);
      if ((g_prev[e] < 0 && g_new >= 0) || (g_prev[e] > 0 && g_new <= 0)) {
        double lo = t, hi = t_new, glo = g_prev[e];
        for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = events[e].g(mid, eval_segment(seg, mid));
          if ((glo < 0) == (gm < 0) && gm != 0) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        if (fired < 0 || dir * (hi - t_event) < 0) {
          fired = static_cast<int>(e);
          t_event = hi;
        }
      }
      g_prev[e] = g_new;
    }

    const double t_stop = fired >= 0 ? t_event : t_new;
    if (std::isfinite(s.dense_stride)) {
      while (dir * (t_stop - (last_sample_t + dir * s.dense_stride)) > 0) {
        last_sample_t += dir * s.dense_stride;
        traj.samples.push_back({last_sample_t, eval_segment(seg, last_sample_t)});
      }
    }
    if (fired >= 0) {
      State ye = eval_segment(seg, t_event);
      traj.add_segment(std::move(seg));
      traj.samples.push_back({t_event, ye});
      log_monitors(t_event, ye);
      traj.termination = Termination::event;
      traj.event_id = events[fired].id;
      break;
    }
    traj.add_segment(std::move(seg));
    t = t_new;
    y = y1;
    k1 = k7;
    traj.samples.push_back({t, y});
    last_sample_t = t;
    log_monitors(t, y);
    if (final_step) {
      traj.termination = Termination::reached_end;
      break;
    }
    if (std::abs(hnew) > s.max_step) hnew = s.max_step;
    if (last_rejected) hnew = std::min(hnew, h);
    last_rejected = false;
    h = hnew;
  }
  return traj;
}

}  // namespace solab::numerics
