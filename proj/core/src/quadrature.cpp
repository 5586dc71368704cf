#include "solab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace solab::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae, descending; odd indices are the Gauss-7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double checked(const ScalarFn& f, double x) {
  const double y = f(x);
  if (std::isnan(y)) {
    throw std::domain_error("integrand returned NaN at x = " +
                            std::to_string(x));
  }
  return y;
}

Panel gk15(const ScalarFn& f, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  evals += 15;
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double scale = std::abs(half);
  resasc *= scale;
  resabs *= scale;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0 && err != 0) {
    err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50 * kEps)) {
    err = std::max(50 * kEps * resabs, err);
  }
  return {a, b, resk * half, err};
}

bool splittable(double a, double b) {
  const double mid = 0.5 * (a + b);
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(b - a) > 8 * kEps * scale &&
         std::abs(b - a) > std::numeric_limits<double>::min() * 1e3 &&
         mid > std::min(a, b) && mid < std::max(a, b);
}

}  // namespace

QuadratureResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                                    const Quadrature& q) {
  if (!(lo < hi)) throw std::invalid_argument("integrate: need lo < hi");
  if (!(q.abs_tol > 0 || q.rel_tol > 0)) {
    throw std::invalid_argument("integrate: a positive tolerance is required");
  }
  if (q.max_subdivisions < 1) {
    throw std::invalid_argument("integrate: max_subdivisions must be >= 1");
  }
  QuadratureResult out;
  std::priority_queue<Panel> open;
  double frozen_value = 0, frozen_error = 0;
  open.push(gk15(f, lo, hi, out.evaluations));
  double total = open.top().value;
  double total_err = open.top().error;

  while (true) {
    const double target = std::max(q.abs_tol, q.rel_tol * std::abs(total));
    if (total_err <= target) break;
    if (open.empty()) {
      throw QuadratureError("integrate: irreducible error at machine resolution",
                            total, total_err);
    }
    if (out.subdivisions >= q.max_subdivisions) {
      throw QuadratureError("integrate: no convergence within " +
                                std::to_string(q.max_subdivisions) +
                                " subdivisions",
                            total, total_err);
    }
    Panel worst = open.top();
    open.pop();
    if (!splittable(worst.a, worst.b)) {
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid, out.evaluations);
    const Panel right = gk15(f, mid, worst.b, out.evaluations);
    ++out.subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    if (open.size() % 64 == 0) {
      // Re-sum occasionally so that incremental updates do not drift.
      auto copy = open;
      double v = frozen_value, e = frozen_error;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = v;
      total_err = e;
    }
  }
  out.value = total;
  out.abs_error = total_err;
  return out;
}

double integrate(const ScalarFn& f, double lo, double hi, const Quadrature& q) {
  return integrate_detailed(f, lo, hi, q).value;
}

namespace {

// Least-squares slope of log2|P_k| against k over the trailing window.
double fit_decay(const std::vector<double>& panels, int window) {
  const int n = static_cast<int>(panels.size());
  const int start = std::max(0, n - window);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = start; k < n; ++k) {
    const double a = std::abs(panels[k]);
    if (a == 0) continue;
    const double y = std::log2(a);
    sx += k;
    sy += y;
    sxx += double(k) * k;
    sxy += k * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::infinity();
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

}  // namespace

ImproperIntegral integrate_improper(const ScalarFn& f, double from,
                                    double toward, const Quadrature& q,
                                    const DivergenceOptions& opts) {
  if (std::isnan(from) || std::isnan(toward) || from == toward ||
      std::isinf(from)) {
    throw std::invalid_argument("integrate_improper: bad limits");
  }
  const bool infinite = std::isinf(toward);
  const double dir = toward > from ? 1.0 : -1.0;
  const double width0 = infinite ? std::max(1.0, std::abs(from)) : 0.0;
  const double dist0 = infinite ? 0.0 : std::abs(toward - from);

  // Panel k covers [point(k), point(k+1)] in the direction of `toward`.
  auto point = [&](int k) {
    if (infinite) return from + dir * width0 * (std::ldexp(1.0, k) - 1.0);
    return toward - dir * dist0 * std::ldexp(1.0, -k);
  };

  // Panels are integrated in the positive direction and signed afterwards.
  Quadrature panel_q = q;
  panel_q.abs_tol = std::max(q.abs_tol * 1e-3, 0.0);

  ImproperIntegral out;
  std::vector<double> contributions;
  double total = 0;
  int divergent_checks = 0;
  for (int k = 0; k < opts.max_panels; ++k) {
    const double x0 = point(k), x1 = point(k + 1);
    if (!infinite && !splittable(std::min(x0, x1), std::max(x0, x1))) {
      // Finite limit reached at machine resolution: finish adaptively on the
      // remainder, which only converges when the decay has been established.
      const double rest =
          dir * integrate(f, std::min(x0, toward), std::max(x0, toward), q);
      out.value = total + rest;
      out.verdict = Verdict::converges;
      out.reached = toward;
      out.panels = k;
      out.decay_exponent = fit_decay(contributions, opts.fit_panels);
      return out;
    }
    const double p =
        dir * integrate(f, std::min(x0, x1), std::max(x0, x1), panel_q);
    contributions.push_back(p);
    total += p;
    out.reached = x1;
    out.panels = k + 1;
    out.value = total;
    if (std::abs(total) > opts.cap) {
      out.verdict = Verdict::diverges;
      out.decay_exponent = fit_decay(contributions, opts.fit_panels);
      return out;
    }
    if (k + 1 < opts.min_panels) continue;
    const double decay = fit_decay(contributions, opts.fit_panels);
    out.decay_exponent = decay;
    if (decay < opts.decay_threshold) {
      if (++divergent_checks >= 3) {
        out.verdict = Verdict::diverges;
        return out;
      }
      continue;
    }
    divergent_checks = 0;
    if (std::isinf(decay)) {
      out.verdict = Verdict::converges;
      return out;
    }
    const double ratio = std::exp2(-decay);
    const double tail = p * ratio / (1.0 - ratio);
    if (std::abs(tail) <= std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
      out.value = total + tail;
      out.verdict = Verdict::converges;
      return out;
    }
    if (!infinite && decay > 0.2 && k > 40) {
      const double rest =
          dir * integrate(f, std::min(x1, toward), std::max(x1, toward), q);
      out.value = total + rest;
      out.verdict = Verdict::converges;
      out.reached = toward;
      return out;
    }
  }
  throw QuadratureError("integrate_improper: no verdict within panel budget",
                        total, std::abs(contributions.back()));
}

}  // namespace solab::numerics
