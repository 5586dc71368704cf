#include <cmath>
#include <random>

#include "doctest.h"
#include "solab/e2_skew.hpp"
#include "solab/finite_difference.hpp"
#include "solab/frame.hpp"
#include "solab/frame_families.hpp"
#include "solab/heisenberg.hpp"
#include "solab/steady.hpp"

using namespace solab;
using frame::FramePoint;

namespace {

FramePoint heis(int n, double phi) {
  return heisenberg::soliton_frame_point(heisenberg::HeisenbergSoliton(n), phi);
}

const e2::E2Trajectory& e2_run() {
  static const e2::E2Trajectory tr = [] {
    numerics::IvpSolver s;
    s.abs_tol = s.rel_tol = 1e-12;
    return e2::shoot_unstable(1.0, e2::EpsilonProfile::quadratic_bump(), 1e-8, s, {100.0, 1e-8});
  }();
  return tr;
}

// A few frames of each constructed family.
std::vector<FramePoint> sample_frames() {
  std::vector<FramePoint> out;
  for (int n = 1; n <= 3; ++n) {
    for (double phi : {0.05, 0.7, 3.0, 40.0}) out.push_back(heis(n, phi));
    out.push_back(heisenberg::model_frame_point(n, heisenberg::AsymptoticEnd::cusp, 0.3));
    out.push_back(heisenberg::model_frame_point(n, heisenberg::AsymptoticEnd::cone, 2.0));
  }
  const auto& tr = e2_run();
  for (double b : {0.05, 0.5, 2.0, 20.0}) out.push_back(e2::frame_point(tr, tr.t_at_b(b)));
  const auto p = steady::make_steady_ii(1, 2, 1.5, -1, {1.0, 2.0});
  for (double d : {0.2, 1.0, 3.0}) out.push_back(steady::frame_point(p, *p.boundary - d));
  return out;
}

}  // namespace

TEST_CASE("shear coefficients") {
  // x_i acting on the (k, t) pair of a Kahler frame.
  const auto p = heis(1, 1.3);
  const auto s = frame::shear_coefficients(p, frame::x_index(1), frame::kK, frame::kT);
  CHECK(s.sigma1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.sigma2 == doctest::Approx(0.0).epsilon(1e-15));

  // A = 1, B = C = D = 0 with X = k on (x_i, y_i).
  FramePoint q(1);
  q.value.A[0] = 1;
  const auto s2 = frame::shear_coefficients(q, frame::kK, frame::x_index(1), frame::y_index(1));
  CHECK(s2.sigma1 == doctest::Approx(0.5));
  CHECK(s2.sigma2 == doctest::Approx(0.0));

  const auto z = frame::shear_coefficients({0, 0}, {0, 0});
  CHECK(z.sigma1 == 0.0);
  CHECK(z.sigma2 == 0.0);
}

TEST_CASE("shear coefficients are linear in the bracket values") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<double, 2> u1{nd(rng), nd(rng)}, u2{nd(rng), nd(rng)};
    const std::array<double, 2> v1{nd(rng), nd(rng)}, v2{nd(rng), nd(rng)};
    const double a = nd(rng), b = nd(rng);
    const auto su = frame::shear_coefficients(u1, u2);
    const auto sv = frame::shear_coefficients(v1, v2);
    const auto sw = frame::shear_coefficients({a * u1[0] + b * v1[0], a * u1[1] + b * v1[1]},
                                              {a * u2[0] + b * v2[0], a * u2[1] + b * v2[1]});
    CHECK(sw.sigma1 == doctest::Approx(a * su.sigma1 + b * sv.sigma1).epsilon(1e-12));
    CHECK(sw.sigma2 == doctest::Approx(a * su.sigma2 + b * sv.sigma2).epsilon(1e-12));
  }
}

TEST_CASE("Kahler residuals") {
  auto p = heis(1, 2.0);
  CHECK(frame::kahler_residual(p) < 1e-14);
  CHECK(frame::integrability_residual(p) < 1e-14);

  auto a = p;
  a.value.A[0] += 0.01;
  // Keep the integrability relation A - D - F - G = 0.
  a.value.D[0] += 0.01;
  CHECK(frame::kahler_residuals(a).rels2 == doctest::Approx(0.02).epsilon(1e-9));

  const double delta = 3e-4;
  auto n = p;
  n.value.N[0] += delta;
  CHECK(frame::kahler_residual(n) == doctest::Approx(delta).epsilon(1e-9));

  // Triples meeting x_1 and y_2 at n = 2 have no bracket terms.
  const auto s = frame::structure_constants(heis(2, 1.0).value);
  CHECK(frame::d_omega(s, frame::kK, frame::x_index(1), frame::y_index(2)) == 0.0);
}

TEST_CASE("Kahler residual along an integrated E(2) trajectory") {
  const auto& tr = e2_run();
  for (double b : {1e-3, 0.1, 1.0, 10.0, 90.0}) {
    const auto p = e2::frame_point(tr, tr.t_at_b(b));
    CHECK(frame::kahler_residual(p) / frame::coefficient_scale(p.value) < 1e-10);
    CHECK(frame::integrability_residual(p) / frame::coefficient_scale(p.value) < 1e-10);
  }
}

TEST_CASE("connection: <nabla_k k, t> = -L") {
  FramePoint p(1);
  p.value.L = 1;
  p.value.N[0] = 1;
  p.value.A[0] = 0.5;
  p.value.D[0] = 0.5;
  p.value.E[0] = -0.5;
  p.value.H[0] = -0.5;
  const auto c = frame::koszul_connection(p);
  CHECK(c.gamma(frame::kK, frame::kK, frame::kT) == doctest::Approx(-1.0));
  // Metric compatibility: gamma(a, b, c) = -gamma(a, c, b).
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int d = 0; d < 4; ++d) CHECK(c.gamma(a, b, d) == doctest::Approx(-c.gamma(a, d, b)));
}

TEST_CASE("curvature at n = 1, phi = 1") {
  const auto r = frame::curvature_at(heis(1, 1.0));
  const double F1 = 0.5284822353;
  CHECK(r.sec_xy[0] == doctest::Approx(-F1).epsilon(1e-9));
  CHECK(r.ricci_xy[0] == doctest::Approx(0.5 * (F1 - 2.0)).epsilon(1e-9));
  CHECK(r.ricci_xy[0] == doctest::Approx(-0.7357589).epsilon(1e-7));
  CHECK(r.ricci_mismatch < 1e-12);
}

TEST_CASE("flat frame has zero curvature and satisfies the steady equations") {
  FramePoint p(2);
  const auto r = frame::curvature_at(p);
  for (double v : r.sec_xy) CHECK(v == 0.0);
  for (double v : r.sec_kx) CHECK(v == 0.0);
  for (double v : r.ricci_xy) CHECK(v == 0.0);
  CHECK(r.sec_kt == 0.0);
  CHECK(r.ricci_kt == 0.0);
  CHECK(r.scalar == 0.0);
  CHECK(frame::soliton_residuals(p).skew == 0.0);
}

TEST_CASE("curvature trace identity and Riemann symmetries on constructed frames") {
  for (const auto& p : sample_frames()) {
    const auto r = frame::curvature_at(p, {1e-8, false});
    double sum = 2 * r.ricci_kt;
    for (double v : r.ricci_xy) sum += 2 * v;
    const double m = frame::coefficient_scale(p.value);
    CHECK(std::abs(r.scalar - sum) / (m * m) < 1e-10);
    CHECK(r.ricci_mismatch / (m * m) < 1e-8);

    const auto rm = frame::riemann_tensor(p);
    const int dim = rm.dim();
    double sym = 0, bianchi = 0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c)
          for (int d = 0; d < dim; ++d) {
            sym = std::max(sym, std::abs(rm(a, b, c, d) + rm(b, a, c, d)));
            sym = std::max(sym, std::abs(rm(a, b, c, d) + rm(a, b, d, c)));
            sym = std::max(sym, std::abs(rm(a, b, c, d) - rm(c, d, a, b)));
            bianchi = std::max(bianchi, std::abs(rm(a, b, c, d) + rm(b, c, a, d) + rm(c, a, b, d)));
          }
    CHECK(sym / (m * m) < 1e-12);
    CHECK(bianchi / (m * m) < 1e-12);
  }
}

TEST_CASE("curvature_at cross-check throws on an inconsistent frame") {
  auto p = heis(1, 1.0);
  p.value.N[0] += 0.1;
  CHECK_THROWS_AS(frame::curvature_at(p), frame::InconsistentFrame);
  CHECK_NOTHROW(frame::curvature_at(p, {1e-8, false}));
}

TEST_CASE("soliton residuals on the Heisenberg frame") {
  for (double phi : {0.5, 1.0, 5.0}) {
    const auto r = frame::soliton_residuals(heis(1, phi));
    CHECK(r.skew < 1e-8);
    CHECK(r.killing_max < 1e-8);
    CHECK(r.identity3 < 1e-8);
    CHECK_FALSE(r.unsatisfiable);
  }
}

TEST_CASE("identity (3) holds on every Kahler frame with N != 0") {
  for (const auto& p : sample_frames()) {
    if (frame::kahler_residual(p) / frame::coefficient_scale(p.value) > 1e-12) continue;
    bool n_nonzero = true;
    for (double v : p.value.N) n_nonzero = n_nonzero && std::abs(v) > 1e-6;
    if (n_nonzero) CHECK(frame::soliton_residuals(p).identity3 < 1e-8);
  }
}

TEST_CASE("full soliton system") {
  CHECK(frame::full_sol_eqns_residual(heis(2, 1.0)) < 1e-8);
  // Lines 3 to 8 vanish identically for tau-dependent data.
  for (const auto& p : sample_frames()) {
    const auto r = frame::full_sol_eqns(p, frame::DirectionalData::tau_dependent(p));
    for (const auto& l : r.lines3to6)
      for (double v : l) CHECK(v == 0.0);
    CHECK(r.lines7to8 == 0.0);
  }
  // Lines 1 and 2 on an E(2) trajectory point with f' = 2 eps(b) a^2.
  const auto& tr = e2_run();
  const auto p = e2::frame_point(tr, tr.t_at_b(1.5));
  const auto r = frame::full_sol_eqns(p, frame::DirectionalData::tau_dependent(p));
  CHECK(r.line2 < 1e-8);
  for (double v : r.line1) CHECK(v < 1e-8);
}

TEST_CASE("independent routes: skew-soliton tensor and Killing defect") {
  for (int n = 1; n <= 3; ++n) {
    for (double phi : {0.1, 1.0, 10.0}) {
      const auto p = heis(n, phi);
      CHECK(frame::skew_soliton_tensor_residual(p) < 1e-8);
      CHECK(frame::killing_defect(p) < 1e-8);
    }
  }
  // A soliton frame with the wrong lambda fails both the reduced equations and the tensor.
  auto p = heis(1, 1.0);
  p.lambda = -0.5;
  CHECK(frame::soliton_residuals(p).skew > 1e-3);
  CHECK(frame::skew_soliton_tensor_residual(p) > 1e-3);
}

TEST_CASE("frame structure derivatives: exact vs finite differences") {
  // The Heisenberg soliton as per-coefficient functions of tau, with and
  // without derivative handles.
  const auto fs = heisenberg::soliton_frame(heisenberg::HeisenbergSoliton(1));
  using Field = std::vector<double> frame::Coefficients::*;
  auto indexed = [&](Field field, bool with_derivative) {
    frame::CoefficientFn c;
    c.value = [fs, field](double t) { return (fs.at(t).value.*field)[0]; };
    if (with_derivative) c.derivative = [fs, field](double t) { return (fs.at(t).deriv.*field)[0]; };
    return std::vector<frame::CoefficientFn>{c};
  };
  auto build = [&](bool d) {
    frame::CoefficientFunctions f;
    f.A = indexed(&frame::Coefficients::A, d);
    f.B = indexed(&frame::Coefficients::B, d);
    f.C = indexed(&frame::Coefficients::C, d);
    f.D = indexed(&frame::Coefficients::D, d);
    f.E = indexed(&frame::Coefficients::E, d);
    f.F = indexed(&frame::Coefficients::F, d);
    f.G = indexed(&frame::Coefficients::G, d);
    f.H = indexed(&frame::Coefficients::H, d);
    f.N = indexed(&frame::Coefficients::N, d);
    f.L.value = [fs](double t) { return fs.at(t).value.L; };
    if (d) f.L.derivative = [fs](double t) { return fs.at(t).deriv.L; };
    f.f.first = [fs](double t) { return fs.at(t).f1; };
    if (d) f.f.second = [fs](double t) { return fs.at(t).f2; };
    return frame::FrameStructure(1, -1.0, f);
  };
  const auto se = build(true), sf = build(false);
  for (double tau : {-0.8, 0.1, 1.7}) {
    const auto pe = se.at(tau), pf = sf.at(tau);
    CHECK_FALSE(pe.fd_derived);
    CHECK(pf.fd_derived);
    CHECK(pf.deriv.A[0] == doctest::Approx(pe.deriv.A[0]).epsilon(1e-6));
    CHECK(pf.deriv.N[0] == doctest::Approx(pe.deriv.N[0]).epsilon(1e-6));
    CHECK(pf.deriv.L == doctest::Approx(pe.deriv.L).epsilon(1e-6));
    CHECK(pf.f2 == doctest::Approx(pe.f2).epsilon(1e-6));
    CHECK(frame::soliton_residuals(pe).skew < 1e-10);
    CHECK(frame::soliton_residuals(pf).skew < 1e-6);
    CHECK(frame::curvature_at(pe).ricci_mismatch < 1e-10);
    CHECK(frame::curvature_at(pf, {1e-5, false}).ricci_mismatch < 1e-5);
  }
}

TEST_CASE("complex structure is an isometry squaring to -1") {
  for (int a = 0; a < frame::dimension(3); ++a) {
    const auto [b, s] = frame::apply_j(a);
    const auto [c, s2] = frame::apply_j(b);
    CHECK(c == a);
    CHECK(s * s2 == -1.0);
  }
}
