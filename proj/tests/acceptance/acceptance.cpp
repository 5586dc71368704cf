// Acceptance runner: one PASS/FAIL line per criterion.
//
//   solab_acceptance            run all fourteen
//   solab_acceptance 4 9        run a subset
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "solab/e2_skew.hpp"
#include "solab/frame.hpp"
#include "solab/heisenberg.hpp"
#include "solab/steady.hpp"

namespace {

using namespace solab;

// Tolerances and thresholds, one block per criterion.
namespace tol {
constexpr double c1_relative = 1e-10;
constexpr double c1_asymptotic = 0.01;
constexpr double c2_soliton = 1e-8;
constexpr double c3_identity = 1e-8;
constexpr double c4_sec = 1e-6;
constexpr double c4_determinant = 1e-10;
constexpr double c5_inf_sharp = -0.64;
constexpr double c5_sup_sharp = -0.02;
constexpr double c5_limit = 1e-3;
constexpr double c6_scalar_limit = 1e-3;
constexpr double c8_model = 5e-3;
constexpr double c8_holomorphic = 1e-8;
constexpr double c9_identity = 1e-7;
constexpr double c9_skew = 1e-7;
constexpr double c9_region = 1e-12;  // scaled by a^2 + c^2
constexpr double c9_runtime_s = 120.0;
constexpr double c10_tail = 1e-5;
constexpr double c10_minorant_factor = 0.9;
constexpr double c11_db_dr = 1e-3;
constexpr double c11_drift = 0.1;
constexpr double c12_exponent = 0.05;
constexpr double c13_residual = 1e-6;
constexpr double c13_length = 1e-6;
constexpr double c14_ricci = 1e-8;
constexpr double c14_closedness = 1e-10;
}  // namespace tol

constexpr double kDelta = 1e-8;
constexpr double kBMax = 1e3;
constexpr std::uint64_t kSeed = 20240607;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed sub-check; the first few are kept in the detail line.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << " failed:";
      detail << " [" << what << "]";
      pass = false;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

// The E(2) runs feed criteria 3, 9, 10, 11 and 14; each is shot once.
struct E2Runs {
  std::vector<e2::E2Trajectory> runs;
  std::vector<double> seconds;
};

const E2Runs& e2_runs() {
  static const E2Runs r = [] {
    E2Runs out;
    numerics::IvpSolver s;
    s.abs_tol = 1e-12;
    s.rel_tol = 1e-12;
    for (const auto& eps : {e2::EpsilonProfile::zero(), e2::EpsilonProfile::quadratic_bump()}) {
      const auto t0 = std::chrono::steady_clock::now();
      out.runs.push_back(e2::shoot_unstable(1.0, eps, kDelta, s, {kBMax, 1e-8}));
      out.seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return out;
  }();
  return r;
}

// Times equally spaced along a trajectory, endpoints included.
std::vector<double> e2_times(const e2::E2Trajectory& tr, int count) {
  std::vector<double> t;
  const double a = tr.path.t_begin(), b = tr.path.t_end();
  for (int i = 0; i < count; ++i) t.push_back(a + (b - a) * i / (count - 1));
  return t;
}

steady::SteadyII steady_reference() { return steady::make_steady_ii(1, 1, 1, -1); }

// Interior steady-II sample times at distances 0.1/|k1| .. 5/|k1| from the
// boundary.
std::vector<double> steady_times(const steady::SteadyII& p, int count) {
  std::vector<double> t;
  for (double d : logspace(0.1, 5.0, count)) {
    d /= std::abs(p.k1);
    t.push_back(std::isinf(p.t_hi) ? *p.boundary + d : *p.boundary - d);
  }
  return t;
}

// 1. F_n recursion, derivative relation and asymptotic ratios.
void criterion1(Outcome& o) {
  double rec = 0, der = 0, small = 0, large = 0;
  for (int n = 1; n <= 5; ++n) {
    for (double phi : logspace(1e-6, 1e3, 200)) {
      const double fn = heisenberg::F(n, phi), fm = (n + 1) * heisenberg::F(n - 1, phi);
      const double pw = 2.0 * std::pow(phi, n);
      rec = std::max(rec, std::abs(fn + fm - pw) / std::max({std::abs(fn), std::abs(fm), pw}));
      const double fp = heisenberg::F_prime(n, phi);
      der = std::max(der, std::abs(fp - (fm - fn / phi)) /
                              std::max({std::abs(fp), std::abs(fm), std::abs(fn / phi)}));
    }
    const double s = 1e-4, l = 1e4;
    const double gs = heisenberg::F(n, s) / std::pow(s, n - 1);
    const double gl = heisenberg::F(n, l) / std::pow(l, n - 1);
    small = std::max(small, std::abs(gs / (2.0 * s * s / (n + 2)) - 1.0));
    large = std::max(large, std::abs(gl / (2.0 * l) - 1.0));
  }
  o.detail << "recursion " << fmt(rec) << ", derivative " << fmt(der) << ", small-phi ratio "
           << fmt(small) << ", large-phi ratio " << fmt(large);
  o.require(rec < tol::c1_relative, "recursion");
  o.require(der < tol::c1_relative, "derivative relation");
  o.require(small < tol::c1_asymptotic, "small-phi asymptotic");
  o.require(large < tol::c1_asymptotic, "large-phi asymptotic");
}

// 2. Heisenberg frame satisfies the skew-soliton and Killing equations.
void criterion2(Outcome& o) {
  double worst = 0;
  for (int n = 1; n <= 3; ++n) {
    const heisenberg::HeisenbergSoliton s(n);
    for (double phi : logspace(1e-2, 1e2, 200)) {
      const auto r = frame::soliton_residuals(heisenberg::soliton_frame_point(s, phi));
      worst = std::max(worst, r.skew + r.killing_max);
    }
  }
  o.detail << "max skew + Killing residual " << fmt(worst);
  o.require(worst < tol::c2_soliton, "soliton residual");
}

// 3. L/N + N'/N^2 = 1 on every Kahler frame.
void criterion3(Outcome& o) {
  double heis = 0, e2v = 0, st = 0;
  for (int n = 1; n <= 3; ++n) {
    const heisenberg::HeisenbergSoliton s(n);
    for (double phi : logspace(1e-2, 1e2, 50)) {
      heis = std::max(heis, frame::soliton_residuals(heisenberg::soliton_frame_point(s, phi)).identity3);
    }
    for (auto end : {heisenberg::AsymptoticEnd::cone, heisenberg::AsymptoticEnd::cusp}) {
      for (double phi : logspace(1e-2, 1e2, 20)) {
        heis = std::max(heis,
                        frame::soliton_residuals(heisenberg::model_frame_point(n, end, phi)).identity3);
      }
    }
  }
  for (const auto& tr : e2_runs().runs) {
    for (double t : e2_times(tr, 50)) {
      e2v = std::max(e2v, frame::soliton_residuals(e2::frame_point(tr, t)).identity3);
    }
  }
  const auto p = steady_reference();
  for (double t : steady_times(p, 20)) {
    st = std::max(st, frame::soliton_residuals(steady::frame_point(p, t)).identity3);
  }
  o.detail << "Heisenberg " << fmt(heis) << ", E(2) " << fmt(e2v) << ", steady-II " << fmt(st);
  o.require(heis < tol::c3_identity, "Heisenberg");
  o.require(e2v < tol::c3_identity, "E(2)");
  o.require(st < tol::c3_identity, "steady-II");
}

// 4. Frame sectional curvatures at phi = 1 and the dim-4 determinant identity.
void criterion4(Outcome& o) {
  const heisenberg::HeisenbergSoliton s(1);
  const auto cr = heisenberg::curvatures(s, 1.0);
  const auto eng = frame::curvature_at(heisenberg::soliton_frame_point(s, 1.0));
  const double exp_xy = -0.5284822, exp_kx = -0.1036383, exp_kt = -0.3212056;
  const double gap = std::max({std::abs(cr.sec_xy[0] - exp_xy), std::abs(cr.sec_kx[0] - exp_kx),
                               std::abs(cr.sec_kt - exp_kt)});
  const double eng_gap = std::max({std::abs(eng.sec_xy[0] - exp_xy),
                                   std::abs(eng.sec_kx[0] - exp_kx),
                                   std::abs(eng.sec_kt - exp_kt)});
  double det = 0;
  for (double phi : {0.1, 1.0, 10.0}) {
    const auto op = heisenberg::dim4_operator(s, phi);
    det = std::max(det, std::abs(op.determinant - op.determinant_identity));
  }
  o.detail << "(Sec(x,y), Sec(k,x), Sec(k,t)) = (" << fmt(cr.sec_xy[0]) << ", "
           << fmt(cr.sec_kx[0]) << ", " << fmt(cr.sec_kt) << "), closed-form gap " << fmt(gap)
           << ", engine gap " << fmt(eng_gap) << ", determinant gap " << fmt(det);
  o.require(gap < tol::c4_sec, "closed-form triple");
  o.require(eng_gap < tol::c4_sec, "engine triple");
  o.require(det < tol::c4_determinant, "determinant identity");
}

// 5. Sampled Sec of decomposable forms in (-2/3, 0), sharp, with the small-phi limits.
void criterion5(Outcome& o) {
  const auto e = heisenberg::sec_extremes_dim4(logspace(1e-3, 1e3, 60), 100000, kSeed);
  const auto cr = heisenberg::curvatures(heisenberg::HeisenbergSoliton(1), 1e-6);
  const double lim = std::max({std::abs(cr.sec_kt + 2.0 / 3.0), std::abs(cr.sec_xy[0] + 2.0 / 3.0),
                               std::abs(cr.sec_kx[0] + 1.0 / 6.0)});
  o.detail << "inf " << fmt(e.inf) << " at phi " << fmt(e.phi_at_inf) << ", sup " << fmt(e.sup)
           << " at phi " << fmt(e.phi_at_sup) << ", limit gap at phi=1e-6 " << fmt(lim);
  o.require(e.inf > -2.0 / 3.0 && e.sup < 0.0, "inside (-2/3, 0)");
  o.require(e.inf < tol::c5_inf_sharp, "inf approaches -2/3");
  o.require(e.sup > tol::c5_sup_sharp, "sup approaches 0");
  o.require(lim < tol::c5_limit, "small-phi limits");
}

// 6. Ricci components in (-1, 0), scalar curvature in (-2m, 0), m = n + 1.
void criterion6(Outcome& o) {
  double ric_lo = 0, ric_hi = -1, lim = 0;
  bool scal_ok = true;
  for (int n = 1; n <= 3; ++n) {
    const heisenberg::HeisenbergSoliton s(n);
    const double m = n + 1;
    for (double phi : logspace(1e-3, 1e3, 60)) {
      const auto cr = heisenberg::curvatures(s, phi);
      for (double v : cr.ricci_xy) {
        ric_lo = std::min(ric_lo, v);
        ric_hi = std::max(ric_hi, v);
      }
      ric_lo = std::min(ric_lo, cr.ricci_kt);
      ric_hi = std::max(ric_hi, cr.ricci_kt);
      scal_ok = scal_ok && cr.scalar > -2.0 * m && cr.scalar < 0.0;
    }
    lim = std::max(lim, std::abs(heisenberg::curvatures(s, 1e-6).scalar + 2.0 * m));
  }
  o.detail << "Ricci range [" << fmt(ric_lo) << ", " << fmt(ric_hi) << "], scalar in (-2m, 0) "
           << (scal_ok ? "yes" : "no") << ", |Scal(1e-6) + 2m| " << fmt(lim);
  o.require(ric_lo > -1.0 && ric_hi < 0.0, "Ricci pinching");
  o.require(scal_ok, "scalar pinching");
  o.require(lim < tol::c6_scalar_limit, "scalar limit");
}

// 7. Distance lower bound and divergence at both ends.
void criterion7(Outcome& o) {
  const double inf = std::numeric_limits<double>::infinity();
  bool ends = true;
  double d14 = inf;
  for (int n = 1; n <= 3; ++n) {
    const heisenberg::HeisenbergSoliton s(n);
    d14 = std::min(d14, heisenberg::distance(s, 1.0, 4.0).value);
    ends = ends && heisenberg::distance(s, 1.0, 0.0).verdict == numerics::Verdict::diverges;
    ends = ends && heisenberg::distance(s, 1.0, inf).verdict == numerics::Verdict::diverges;
    ends = ends && heisenberg::gradient_flow_time(s, 1.0, 0.0).verdict == numerics::Verdict::diverges;
    ends = ends && heisenberg::gradient_flow_time(s, 1.0, inf).verdict == numerics::Verdict::diverges;
  }
  o.detail << "min distance over [1, 4] " << fmt(d14) << " (bound sqrt2), divergence at 0 and inf "
           << (ends ? "detected" : "missing");
  o.require(d14 > std::sqrt(2.0), "distance bound");
  o.require(ends, "divergence verdicts");
}

// 8. Asymptotic cone and cusp models; holomorphic sectional curvature of the cusp model.
void criterion8(Outcome& o) {
  double cone = 0, cusp = 0, hol = 0;
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> nd;
  for (int n = 1; n <= 3; ++n) {
    const heisenberg::HeisenbergSoliton s(n);
    cone = std::max(cone, heisenberg::asymptotic_model_deviation(s, heisenberg::AsymptoticEnd::cone, 1e3));
    cusp = std::max(cusp, heisenberg::asymptotic_model_deviation(s, heisenberg::AsymptoticEnd::cusp, 1e-3));
  }
  for (int n = 1; n <= 2; ++n) {
    const int dim = frame::dimension(n);
    for (double phi : {0.1, 1.0, 10.0}) {
      const auto rm = frame::riemann_tensor(
          heisenberg::model_frame_point(n, heisenberg::AsymptoticEnd::cusp, phi));
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> u(dim), ju(dim, 0.0);
        double norm = 0;
        for (double& x : u) {
          x = nd(rng);
          norm += x * x;
        }
        for (double& x : u) x /= std::sqrt(norm);
        for (int a = 0; a < dim; ++a) {
          const auto [b, sign] = frame::apply_j(a);
          ju[b] += sign * u[a];
        }
        hol = std::max(hol, std::abs(rm.sectional(u, ju) + 2.0 / (n + 2)));
      }
    }
  }
  o.detail << "cone deviation at 1e3 " << fmt(cone) << ", cusp deviation at 1e-3 " << fmt(cusp)
           << ", holomorphic sectional gap " << fmt(hol);
  o.require(cone < tol::c8_model, "cone model");
  o.require(cusp < tol::c8_model, "cusp model");
  o.require(hol < tol::c8_holomorphic, "holomorphic sectional curvature");
}

// 9. E(2) shooting: classification, monitors, invariant region, skew residual, runtime.
void criterion9(Outcome& o) {
  const auto& r = e2_runs();
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto& tr = r.runs[i];
    double ident = 0;
    for (const char* id : {e2::kMonitorAB, e2::kMonitorBC, e2::kMonitorAC, e2::kMonitorAoverB,
                           e2::kMonitorC2A2}) {
      ident = std::max(ident, tr.path.max_residual(id));
    }
    const auto sk = e2::skew_soliton_residual(tr, 50);
    o.detail << (i ? "; " : "") << tr.eps.name << ": " << e2::to_string(tr.classification)
             << ", identities " << fmt(ident) << ", region " << fmt(tr.region_violation)
             << ", skew " << fmt(sk.skew) << ", " << fmt(r.seconds[i]) << " s";
    o.require(tr.classification == e2::Classification::case3_unstable_curve,
              tr.eps.name + " classification");
    o.require(ident < tol::c9_identity, tr.eps.name + " identities");
    o.require(tr.region_violation <= tol::c9_region, tr.eps.name + " invariant region");
    o.require(sk.skew < tol::c9_skew, tr.eps.name + " skew residual");
    o.require(r.seconds[i] < tol::c9_runtime_s, tr.eps.name + " runtime");
  }
}

// 10. E(2) distances: convergent backward tail, forward minorant, b' >= K1 b^3.
void criterion10(Outcome& o) {
  const auto& r = e2_runs();
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto d = e2::distance_profile(r.runs[i]);
    const auto& name = r.runs[i].eps.name;
    o.detail << (i ? "; " : "") << name << ": tail " << fmt(d.tail_below) << ", forward "
             << fmt(d.forward_length) << " vs 0.9 K2 ln10 = "
             << fmt(tol::c10_minorant_factor * d.forward_minorant) << ", K1 " << fmt(d.K1);
    o.require(d.tail_below < tol::c10_tail, name + " backward tail");
    o.require(d.forward_length >= tol::c10_minorant_factor * d.forward_minorant,
              name + " forward minorant");
    o.require(d.K1 > 0.0, name + " K1 signature");
  }
}

// 11. Smooth closing at the bolt.
void criterion11(Outcome& o) {
  const auto& r = e2_runs();
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const auto b = e2::bolt_smoothness(r.runs[i], tol::c11_db_dr, tol::c11_drift);
    const auto& name = r.runs[i].eps.name;
    o.detail << (i ? "; " : "") << name << ": db/dr " << fmt(b.db_dr) << ", drifts "
             << fmt(b.smooth2_drift) << ", " << fmt(b.kahler_drift);
    o.require(std::abs(b.db_dr - 1.0) <= tol::c11_db_dr, name + " db/dr");
    o.require(b.smooth2_drift < tol::c11_drift, name + " (a^2-c^2)/r^2");
    o.require(b.kahler_drift < tol::c11_drift, name + " (cr-ab)/r^3");
  }
}

// 12. Cauchy starts off the invariant region blow up with exponent -1/2.
void criterion12(Outcome& o) {
  numerics::IvpSolver s;
  s.abs_tol = 1e-10;
  s.rel_tol = 1e-10;
  const struct {
    e2::E2State start;
    e2::Classification expect;
  } cases[] = {{{2, 1, 1, 0, 0}, e2::Classification::case1},
               {{1, 1, 3, 0, 0}, e2::Classification::case2}};
  for (const auto& c : cases) {
    const auto tr = e2::classify_cauchy(c.start, e2::EpsilonProfile::zero(), s);
    std::ostringstream start;
    start << "(" << c.start.a << "," << c.start.b << "," << c.start.c << ")";
    o.detail << (&c == cases ? "" : "; ") << start.str() << ": "
             << e2::to_string(tr.classification) << ", exponent " << fmt(tr.blowup.exponent);
    o.require(tr.classification == c.expect, start.str() + " classification");
    o.require(std::abs(tr.blowup.exponent + 0.5) <= tol::c12_exponent, start.str() + " exponent");
  }
}

// 13. Steady case II: equation residual, tanh^-1 length vs quadrature on random
// admissible draws, finite-length boundary.
void criterion13(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> mag(0.2, 3.0), coin(0.0, 1.0), span(0.5, 5.0);
  double res = 0, len = 0;
  bool incomplete = true;
  for (int draw = 0; draw < 20; ++draw) {
    const double sign = coin(rng) < 0.5 ? -1.0 : 1.0;
    const double k = sign * mag(rng), k1 = sign * mag(rng), k2 = -mag(rng), beta = mag(rng);
    const auto p = steady::make_steady_ii(k, beta, k1, k2);
    for (double t : steady_times(p, 10)) res = std::max(res, std::abs(steady::ii_simple_residual_fd(p, t)));
    // Interval toward the interior from the boundary; every third draw ends on it.
    const double w = 1.0 / std::abs(k1), into = std::isinf(p.t_hi) ? 1.0 : -1.0;
    const double near = *p.boundary + into * (draw % 3 == 0 ? 0.0 : 0.5 * coin(rng) * w);
    const double far = near + into * span(rng) * w;
    const double closed = steady::normal_geodesic_length(p, near, far);
    const double quad = steady::normal_geodesic_length_quadrature(p, near, far);
    len = std::max(len, std::abs(closed - quad));
    const auto v = steady::incompleteness_verdict(p);
    const auto& end = std::isinf(p.t_hi) ? v.lower : v.upper;
    incomplete = incomplete && v.verdict == "incomplete" && end.finite &&
                 std::abs(end.t_limit - *p.boundary) == 0.0;
  }
  o.detail << "max FD residual " << fmt(res) << ", max |closed - quadrature| " << fmt(len)
           << " over 20 draws, boundary at finite distance "
           << (incomplete ? "in every draw" : "missed");
  o.require(res < tol::c13_residual, "FD residual");
  o.require(len < tol::c13_length, "length agreement");
  o.require(incomplete, "incompleteness");
}

// 14. Curvature-trace Ricci vs the frame formula; closedness of omega. Both
// are measured against the coefficient scale M (Ricci / M^2, closedness / M):
// toward the E(2) bolt the coefficients grow like 1/b, and the rounded inputs
// only satisfy the Kahler relations to M * eps.
void criterion14(Outcome& o) {
  double ricci = 0, two = 0, three = 0, ricci_abs = 0, closed_abs = 0;
  const frame::CurvatureOptions opts{tol::c14_ricci, false};
  auto visit = [&](const frame::FramePoint& p) {
    const double m = frame::coefficient_scale(p.value);
    const double mismatch = frame::curvature_at(p, opts).ricci_mismatch;
    const auto k = frame::kahler_residuals(p);
    ricci = std::max(ricci, mismatch / (m * m));
    two = std::max(two, k.closed_two / m);
    three = std::max(three, k.closed_three / m);
    ricci_abs = std::max(ricci_abs, mismatch);
    closed_abs = std::max({closed_abs, k.closed_two, k.closed_three});
  };
  int frames = 0;
  double heis_abs = 0;
  for (int n = 1; n <= 3; ++n) {
    const heisenberg::HeisenbergSoliton s(n);
    for (double phi : logspace(1e-2, 1e2, 40)) {
      for (const auto& p : {heisenberg::soliton_frame_point(s, phi),
                            heisenberg::model_frame_point(n, heisenberg::AsymptoticEnd::cone, phi),
                            heisenberg::model_frame_point(n, heisenberg::AsymptoticEnd::cusp, phi)}) {
        visit(p);
        heis_abs = std::max(heis_abs, frame::curvature_at(p, opts).ricci_mismatch);
        ++frames;
      }
    }
  }
  for (const auto& tr : e2_runs().runs) {
    for (double t : e2_times(tr, 50)) {
      visit(e2::frame_point(tr, t));
      ++frames;
    }
  }
  const auto p = steady_reference();
  for (double t : steady_times(p, 20)) {
    visit(steady::frame_point(p, t));
    ++frames;
  }
  o.detail << frames << " frames: Ricci mismatch / M^2 " << fmt(ricci) << ", closedness / M "
           << fmt(two) << " (two subbundles), " << fmt(three)
           << " (three subbundles); unscaled maxima " << fmt(ricci_abs) << " and "
           << fmt(closed_abs) << ", Heisenberg unscaled Ricci " << fmt(heis_abs);
  o.require(ricci < tol::c14_ricci, "Ricci agreement");
  o.require(two < tol::c14_closedness, "two-subbundle closedness");
  o.require(three < tol::c14_closedness, "three-subbundle closedness");
  o.require(heis_abs < tol::c14_ricci, "Heisenberg unscaled Ricci agreement");
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria = {
    {"F_n recursion, derivative and asymptotic ratios", criterion1},
    {"Heisenberg soliton equations", criterion2},
    {"identity L/N + N'/N^2 = 1 on all frames", criterion3},
    {"curvature reproduction at phi = 1", criterion4},
    {"sharp dim-4 sectional curvature bounds", criterion5},
    {"Ricci and scalar pinching", criterion6},
    {"distance and completeness", criterion7},
    {"asymptotic models", criterion8},
    {"E(2) end-to-end shooting", criterion9},
    {"E(2) distances", criterion10},
    {"bolt smoothness", criterion11},
    {"Cauchy case classification", criterion12},
    {"steady case II", criterion13},
    {"frame engine self-consistency", criterion14},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s' (1..%zu)\n", argv[i], kCriteria.size());
      return 2;
    }
    selected.push_back(c);
  }
  if (selected.empty()) {
    for (int c = 1; c <= static_cast<int>(kCriteria.size()); ++c) selected.push_back(c);
  }
  int failed = 0;
  for (int c : selected) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      kCriteria[c - 1].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s (%s; %.2f s)\n", c, o.pass ? "PASS" : "FAIL",
                kCriteria[c - 1].first.c_str(), o.detail.str().c_str(), s);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(selected.size()) - failed,
              selected.size());
  return failed == 0 ? 0 : 1;
}
