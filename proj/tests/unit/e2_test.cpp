#include <cmath>
#include <map>

#include "doctest.h"
#include "solab/e2_skew.hpp"
#include "solab/finite_difference.hpp"
#include "solab/frame_json.hpp"

using namespace solab;
using e2::EpsilonProfile;

namespace {

numerics::IvpSolver tight() {
  numerics::IvpSolver s;
  s.abs_tol = s.rel_tol = 1e-12;
  return s;
}

const e2::E2Trajectory& run(const EpsilonProfile& eps, double delta = 1e-8) {
  static std::map<std::string, e2::E2Trajectory> cache;
  const std::string key = eps.name + "/" + std::to_string(delta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, e2::shoot_unstable(1.0, eps, delta, tight())).first;
  return it->second;
}

}  // namespace

TEST_CASE("vector field") {
  for (const auto& eps : {EpsilonProfile::zero(), EpsilonProfile::quadratic_bump()}) {
    const auto d = e2::vector_field({1, 0, 1, 0, 0}, eps);
    for (double v : d) CHECK(v == 0.0);
  }
  const auto d = e2::vector_field({1, 1, 1, 0, 0}, EpsilonProfile::zero());
  CHECK(d[0] == doctest::Approx(0.0));
  CHECK(d[1] == doctest::Approx(1.0));
  CHECK(d[2] == doctest::Approx(1.0));
  CHECK(d[3] == doctest::Approx(0.0));
}

TEST_CASE("Jacobian at the equilibrium and against finite differences") {
  for (const auto& eps : {EpsilonProfile::zero(), EpsilonProfile::quadratic_bump(), EpsilonProfile::poly(0.7)}) {
    const auto ev = e2::eigenvalues(e2::jacobian({1, 0, 1, 0, 0}, eps));
    CHECK(ev[0] == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(std::abs(ev[1]) < 1e-8);
    CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-8));

    const e2::E2State s{0.8, 0.6, 1.3, 0, 0};
    const auto j = e2::jacobian(s, eps);
    for (int col = 0; col < 3; ++col) {
      for (int row = 0; row < 3; ++row) {
        const auto f = [&](double x) {
          e2::E2State t = s;
          (col == 0 ? t.a : col == 1 ? t.b : t.c) = x;
          return e2::vector_field(t, eps)[row];
        };
        const double x0 = col == 0 ? s.a : col == 1 ? s.b : s.c;
        CHECK(j[row][col] == doctest::Approx(numerics::fd_derivative(f, x0, 1, 1e-5)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("admissibility items") {
  CHECK(e2::check_admissible(EpsilonProfile::zero()).admissible);
  CHECK(e2::check_admissible(EpsilonProfile::quadratic_bump()).admissible);
  CHECK(e2::check_admissible(EpsilonProfile::even_polynomial({0, 1, 0.25})).admissible);

  const auto offset = spec::load_epsilon_profile(R"({"name": "offset", "expression": "0.1 + b^2"})");
  const auto odd = spec::load_epsilon_profile(R"({"name": "odd", "expression": "b^2 + b^3"})");
  const auto steep = spec::load_epsilon_profile(R"json({"name": "steep", "expression": "10*b^2*exp(-b^2)"})json");
  CHECK(e2::check_admissible(offset).violated_item == "i");
  CHECK(e2::check_admissible(odd).violated_item == "iii");
  CHECK(e2::check_admissible(steep).violated_item == "ii");
  try {
    e2::require_admissible(odd);
    FAIL("expected InadmissibleProfile");
  } catch (const e2::InadmissibleProfile& e) {
    CHECK(e.item() == "iii");
  }
}

TEST_CASE("shooting from (1, 0, 1): invariant region and monotonicity") {
  const auto& tr = run(EpsilonProfile::zero(), 1e-6);
  CHECK(tr.classification == e2::Classification::case3_unstable_curve);
  CHECK(tr.region_violation <= 1e-12);
  double prev_ratio = 2, prev_ab = 0, prev_bc = 0, prev_ac = 0, prev_b = 0;
  for (const auto& s : tr.path.samples) {
    const double a = s.y[0], b = s.y[1], c = s.y[2];
    CHECK(a / c <= prev_ratio + 1e-15);
    CHECK(a * b > prev_ab);
    CHECK(b * c > prev_bc);
    CHECK(a * c >= prev_ac);
    CHECK(b > prev_b);
    prev_ratio = a / c;
    prev_ab = a * b;
    prev_bc = b * c;
    prev_ac = a * c;
    prev_b = b;
  }
  CHECK(tr.path.final_state()[1] >= 1e3 * (1 - 1e-12));
}

TEST_CASE("product identities hold along the trajectory (monitors and finite differences)") {
  for (const auto& eps : {EpsilonProfile::zero(), EpsilonProfile::quadratic_bump()}) {
    const auto& tr = run(eps);
    for (const char* id : {e2::kMonitorAB, e2::kMonitorBC, e2::kMonitorAC, e2::kMonitorAoverB,
                           e2::kMonitorC2A2}) {
      CHECK(tr.path.max_residual(id) < 1e-7);
    }
    // Derivatives of products along the dense output vs the right-hand sides.
    for (double bq : {0.05, 0.5, 3.0}) {
      const double t = tr.t_at_b(bq);
      const auto st = [&](double x) { return tr.state_at(x); };
      const auto s = st(t);
      const double e = eps.eval(s.b);
      const auto ab = [&](double x) { auto v = st(x); return v.a * v.b; };
      const auto bc = [&](double x) { auto v = st(x); return v.b * v.c; };
      const auto ac = [&](double x) { auto v = st(x); return v.a * v.c; };
      const auto aob = [&](double x) { auto v = st(x); return v.a / v.b; };
      const double h = 1e-5;
      CHECK(numerics::fd_derivative(ab, t, 1, h) ==
            doctest::Approx(s.a * s.b * s.c * s.c).epsilon(1e-5));
      CHECK(numerics::fd_derivative(bc, t, 1, h) ==
            doctest::Approx(s.b * s.c * s.a * s.a * (1 + s.b * s.b + e)).epsilon(1e-5));
      CHECK(numerics::fd_derivative(ac, t, 1, h) ==
            doctest::Approx(s.a * s.a * s.a * s.c * (s.b * s.b + e)).epsilon(1e-5));
      CHECK(numerics::fd_derivative(aob, t, 1, h) ==
            doctest::Approx(-s.a * s.a * s.a / s.b).epsilon(1e-5));
    }
  }
}

TEST_CASE("shooting offset only shifts time") {
  const auto& a = run(EpsilonProfile::zero(), 1e-8);
  const auto& b = run(EpsilonProfile::zero(), 1e-9);
  for (double bq : {0.1, 0.3, 1.0, 5.0, 50.0, 500.0}) {
    const auto sa = a.state_at(a.t_at_b(bq)), sb = b.state_at(b.t_at_b(bq));
    CHECK(std::abs(sa.a - sb.a) < 1e-5 * std::max(1.0, sa.a));
    CHECK(std::abs(sa.c - sb.c) < 1e-5 * std::max(1.0, sa.c));
  }
}

TEST_CASE("Cauchy classification") {
  numerics::IvpSolver s;
  s.abs_tol = s.rel_tol = 1e-10;
  const auto c1 = e2::classify_cauchy({2, 1, 1, 0, 0}, EpsilonProfile::zero(), s);
  CHECK(c1.classification == e2::Classification::case1);
  CHECK(c1.blowup.variable == "a");
  CHECK(c1.blowup.exponent == doctest::Approx(-0.5).epsilon(0.1));
  const auto c2 = e2::classify_cauchy({1, 1, 3, 0, 0}, EpsilonProfile::zero(), s);
  CHECK(c2.classification == e2::Classification::case2);
  CHECK(c2.blowup.variable == "c");
  CHECK(std::abs(c2.blowup.exponent + 0.5) < 0.05);
  CHECK(e2::sign_class({2, 1, 1, 0, 0}, EpsilonProfile::zero()) == e2::Classification::case1);
  CHECK(e2::sign_class({1, 1, 3, 0, 0}, EpsilonProfile::zero()) == e2::Classification::case2);

  // Round trip: a state on the unstable curve integrates back to (q, 0, q).
  const auto& tr = run(EpsilonProfile::zero());
  const auto st = tr.state_at(tr.t_at_b(0.5));
  const auto back = e2::classify_cauchy(st, EpsilonProfile::zero(), tight());
  CHECK(back.classification == e2::Classification::case3_unstable_curve);
  CHECK(std::abs(back.q - 1.0) < 1e-4);
}

TEST_CASE("distance profile") {
  for (const auto& eps : {EpsilonProfile::zero(), EpsilonProfile::quadratic_bump()}) {
    const auto d = e2::distance_profile(run(eps));
    CHECK(d.tail_below < 1e-5);
    CHECK(d.backward_length > d.tail_below);
    CHECK(d.forward_length >= 0.9 * d.forward_minorant);
    CHECK(d.forward_minorant == doctest::Approx(d.K2 * std::log(10.0)));
    CHECK(d.K1 > 0);
    CHECK(d.ac_bound_margin > 0);
    // The literal form ac >= q^2 sqrt(2 + b^2) fails near b_p.
    CHECK(d.ac_literal_margin < 0);
    CHECK(d.nullcline_margin > -1e-9);
  }
}

TEST_CASE("bolt smoothness") {
  for (const auto& eps : {EpsilonProfile::zero(), EpsilonProfile::quadratic_bump()}) {
    const auto b = e2::bolt_smoothness(run(eps));
    CHECK(b.db_dr == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(b.smooth2_drift < 0.1);
    CHECK(b.kahler_drift < 0.1);
    CHECK(b.even_drift < 0.1);
    CHECK(b.pass);
  }
}

TEST_CASE("skew-soliton residual on the E(2) frames") {
  for (const auto& eps : {EpsilonProfile::zero(), EpsilonProfile::quadratic_bump()}) {
    const auto& tr = run(eps);
    const auto r = e2::skew_soliton_residual(tr, 50);
    CHECK(r.samples == 50);
    CHECK(r.skew < 1e-7);
    // The Killing conditions fail: the potential gradient is not holomorphic.
    CHECK(r.killing_frame > 0);
    // Away from the bolt the unscaled residual is small as well.
    const auto p = e2::frame_point(tr, tr.t_at_b(2.0));
    CHECK(frame::soliton_residuals(p).skew < 1e-8);
  }
}

TEST_CASE("e2 frame structure indexed by tau = sqrt2 r") {
  const auto& tr = run(EpsilonProfile::quadratic_bump());
  const auto fs = e2::e2_frame(tr);
  const double t = tr.t_at_b(1.0);
  const double tau = std::sqrt(2.0) * tr.path.interpolate(t)[4];
  const auto a = fs.at(tau), b = e2::frame_point(tr, t);
  CHECK(a.value.L == doctest::Approx(b.value.L).epsilon(1e-8));
  CHECK(a.value.N[0] == doctest::Approx(b.value.N[0]).epsilon(1e-8));
}

TEST_CASE("shooting errors") {
  CHECK_THROWS_AS(e2::shoot_unstable(-1.0, EpsilonProfile::zero(), 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(e2::shoot_unstable(1.0, EpsilonProfile::zero(), 0.0), std::invalid_argument);
}
