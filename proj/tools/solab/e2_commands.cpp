#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>

#include "commands.hpp"
#include "solab/e2_skew.hpp"
#include "solab/frame_json.hpp"

namespace solab::cli {

namespace {

struct ShootArgs {
  double q = 1;
  double delta = 1e-8;
  std::string epsilon = "zero";
  double b_max = 1e3;
  double ivp_tol = 1e-12;
  double monitor_tol = 1e-7;
  int samples = 50;
};

e2::EpsilonProfile admissible_profile(const std::string& arg, double b_max) {
  auto eps = spec::epsilon_from_argument(arg);
  e2::require_admissible(eps, b_max);
  return eps;
}

numerics::IvpSolver solver(double tol) {
  numerics::IvpSolver s;
  s.abs_tol = s.rel_tol = tol;
  return s;
}

json params_json(const ShootArgs& a) {
  return {{"q", a.q}, {"delta", a.delta}, {"epsilon", a.epsilon}, {"b_max", a.b_max},
          {"ivp_tol", a.ivp_tol}};
}

struct Shot {
  e2::E2Trajectory traj;
  double seconds;
};

Shot shoot(const ShootArgs& a) {
  const auto eps = admissible_profile(a.epsilon, a.b_max);
  e2::ShootOptions o;
  o.b_max = a.b_max;
  const auto t0 = std::chrono::steady_clock::now();
  auto traj = e2::shoot_unstable(a.q, eps, a.delta, solver(a.ivp_tol), o);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(traj), sec};
}

// Product identity monitors and the invariant region.
void monitor_checks(Report& r, const e2::E2Trajectory& tr, double tol) {
  json m = json::object();
  for (const char* id : {e2::kMonitorAB, e2::kMonitorBC, e2::kMonitorAC, e2::kMonitorAoverB,
                         e2::kMonitorC2A2}) {
    const double v = tr.path.max_residual(id);
    m[id] = v;
    r.below(std::string("identity-") + id, v, tol);
  }
  r.data()["monitors"] = m;
  r.data()["region_violation"] = tr.region_violation;
  r.below("invariant-region", tr.region_violation, 1e-8);
}

Table trajectory_table(const e2::E2Trajectory& tr) {
  Table t;
  t.header = {"t", "a", "b", "c", "f", "r"};
  for (const auto& s : tr.path.samples) {
    t.rows.push_back({s.t, s.y[0], s.y[1], s.y[2], s.y[3], s.y[4]});
  }
  return t;
}

void trajectory_data(Report& r, const Shot& s) {
  const auto& tr = s.traj;
  const auto& y = tr.path.final_state();
  r.data()["classification"] = e2::to_string(tr.classification);
  r.data()["t_begin"] = tr.path.t_begin();
  r.data()["t_end"] = tr.path.t_end();
  r.data()["final"] = {{"a", y[0]}, {"b", y[1]}, {"c", y[2]}, {"f", y[3]}, {"r", y[4]}};
  r.data()["steps"] = tr.path.accepted_steps;
  r.data()["termination"] = numerics::to_string(tr.path.termination);
  std::fprintf(stderr, "shot integrated in %.3f s\n", s.seconds);
  r.flag("classification-case3",
         tr.classification == e2::Classification::case3_unstable_curve,
         e2::to_string(tr.classification));
}

int integrate(Context& ctx, const ShootArgs& a) {
  Report r(ctx.command);
  r.params() = params_json(a);
  const auto s = shoot(a);
  trajectory_data(r, s);
  monitor_checks(r, s.traj, a.monitor_tol);
  return emit(r, trajectory_table(s.traj), ctx.out);
}

int verify(Context& ctx, const ShootArgs& a) {
  Report r(ctx.command);
  r.params() = params_json(a);
  r.params()["samples"] = a.samples;
  const auto s = shoot(a);
  trajectory_data(r, s);
  monitor_checks(r, s.traj, a.monitor_tol);
  const auto sk = e2::skew_soliton_residual(s.traj, a.samples);
  r.data()["skew"] = {{"scaled", sk.skew}, {"absolute", sk.skew_absolute},
                      {"killing_frame_min", sk.killing_frame},
                      {"killing_coordinate_min", sk.killing_coordinate}};
  r.below("skew-soliton-residual", sk.skew, a.monitor_tol);
  if (s.traj.path.final_state()[1] >= 100.0) {
    const auto d = e2::distance_profile(s.traj);
    r.data()["distance"] = {
        {"backward_length", d.backward_length}, {"tail_below", d.tail_below},
        {"b_tail", d.b_tail}, {"forward_length", d.forward_length}, {"b_lo", d.b_lo},
        {"b_hi", d.b_hi}, {"K2", d.K2}, {"forward_minorant", d.forward_minorant},
        {"K1", d.K1}, {"K1_last_decade", d.K1_last_decade}, {"b_p", d.b_p},
        {"ac_bound_margin", d.ac_bound_margin}, {"ac_literal_margin", d.ac_literal_margin},
        {"nullcline_margin", d.nullcline_margin}};
    r.below("backward-tail", d.tail_below, 1e-5);
    r.above("forward-length-vs-minorant", d.forward_length, 0.9 * d.forward_minorant);
    r.above("K1-positive", d.K1, 0.0);
    r.above("ac-bound", d.ac_bound_margin, 0.0);
    r.above("nullcline-bound", d.nullcline_margin, -1e-9);
  }
  return emit(r, trajectory_table(s.traj), ctx.out);
}

int bolt(Context& ctx, const ShootArgs& a, double db_dr_tol, double drift_tol) {
  Report r(ctx.command);
  r.params() = params_json(a);
  const auto s = shoot(a);
  trajectory_data(r, s);
  const auto b = e2::bolt_smoothness(s.traj, db_dr_tol, drift_tol);
  r.data()["bolt"] = {{"db_dr", b.db_dr}, {"r_probe", b.r_probe}, {"radii", b.radii},
                      {"smooth2", b.smooth2}, {"kahler", b.kahler},
                      {"even_slope", b.even_slope}, {"smooth2_drift", b.smooth2_drift},
                      {"kahler_drift", b.kahler_drift}, {"even_drift", b.even_drift}};
  r.near("db/dr-at-bolt", b.db_dr, 1.0, db_dr_tol);
  r.below("(a^2-c^2)/r^2-drift", b.smooth2_drift, drift_tol);
  r.below("(cr-ab)/r^3-drift", b.kahler_drift, drift_tol);
  r.below("d(a^2+c^2)/dr/r-drift", b.even_drift, drift_tol);
  Table t;
  t.header = {"r", "smooth2", "kahler", "even_slope"};
  for (std::size_t k = 0; k < b.radii.size(); ++k) {
    t.rows.push_back({b.radii[k], b.smooth2[k], b.kahler[k], b.even_slope[k]});
  }
  return emit(r, t, ctx.out);
}

int classify(Context& ctx, double a0, double b0, double c0, const std::string& epsilon,
             const std::string& expect, double ivp_tol) {
  const auto eps = admissible_profile(epsilon, 1e3);
  Report r(ctx.command);
  r.params() = {{"a", a0}, {"b", b0}, {"c", c0}, {"epsilon", epsilon}, {"ivp_tol", ivp_tol}};
  const auto tr = e2::classify_cauchy({a0, b0, c0, 0.0, 0.0}, eps, solver(ivp_tol));
  const auto cls = tr.classification;
  r.data()["classification"] = e2::to_string(cls);
  r.data()["sign_class"] = e2::to_string(e2::sign_class({a0, b0, c0, 0.0, 0.0}, eps));
  r.data()["note"] = tr.note;
  r.data()["termination"] = numerics::to_string(tr.path.termination);
  r.flag("classified", cls != e2::Classification::ambiguous, e2::to_string(cls));
  if (cls == e2::Classification::case1 || cls == e2::Classification::case2) {
    r.data()["blowup"] = {{"variable", tr.blowup.variable}, {"xi", tr.blowup.xi},
                          {"exponent", tr.blowup.exponent},
                          {"fit_points", tr.blowup.fit_points}};
    r.near("blowup-exponent", tr.blowup.exponent, -0.5, 0.05);
  } else if (cls == e2::Classification::case3_unstable_curve) {
    r.data()["q"] = tr.q;
  }
  if (!expect.empty()) r.flag("expected-classification", expect == e2::to_string(cls), expect);
  return emit(r, trajectory_table(tr), ctx.out);
}

void shoot_options(CLI::App* c, ShootArgs& a) {
  c->add_option("--q", a.q, "equilibrium (q, 0, q), q > 0")->capture_default_str();
  c->add_option("--delta", a.delta, "offset along the unstable direction")->capture_default_str();
  c->add_option("--epsilon", a.epsilon, "zero, quadratic-bump or a JSON file")
      ->capture_default_str();
  c->add_option("--b-max", a.b_max, "stop when b reaches this")->capture_default_str();
  c->add_option("--ivp-tol", a.ivp_tol, "absolute and relative integrator tolerance")
      ->capture_default_str();
}

}  // namespace

void add_e2_commands(CLI::App& app, Context& ctx) {
  auto* g = app.add_subcommand("e2", "E(2) skew-solitons in dimension four");
  g->require_subcommand(1);
  g->fallthrough();

  auto in = std::make_shared<ShootArgs>();
  auto* ci = g->add_subcommand("integrate", "shoot the unstable curve; trajectory CSV + verdict");
  shoot_options(ci, *in);
  ci->add_option("--monitor-tol", in->monitor_tol, "bound on the identity monitors")
      ->capture_default_str();
  ci->callback([&ctx, in] {
    ctx.command = "e2 integrate";
    ctx.run = [&ctx, in] { return integrate(ctx, *in); };
  });

  auto ve = std::make_shared<ShootArgs>();
  auto* cv = g->add_subcommand("verify", "skew-soliton residual, identities and distances");
  shoot_options(cv, *ve);
  cv->add_option("--monitor-tol", ve->monitor_tol, "bound on identities and skew residual")
      ->capture_default_str();
  cv->add_option("--samples", ve->samples, "residual samples along the trajectory")
      ->capture_default_str();
  cv->callback([&ctx, ve] {
    ctx.command = "e2 verify";
    ctx.run = [&ctx, ve] { return verify(ctx, *ve); };
  });

  struct BoltOpts {
    ShootArgs shoot;
    double db_dr_tol = 1e-3;
    double drift_tol = 0.1;
  };
  auto bo = std::make_shared<BoltOpts>();
  auto* cb = g->add_subcommand("bolt", "smoothness checks at the bolt r = 0");
  shoot_options(cb, bo->shoot);
  cb->add_option("--db-dr-tol", bo->db_dr_tol, "tolerance on db/dr = 1")->capture_default_str();
  cb->add_option("--drift-tol", bo->drift_tol, "relative drift per decade")->capture_default_str();
  cb->callback([&ctx, bo] {
    ctx.command = "e2 bolt";
    ctx.run = [&ctx, bo] { return bolt(ctx, bo->shoot, bo->db_dr_tol, bo->drift_tol); };
  });

  struct ClassifyOpts {
    double a = 1, b = 1, c = 1;
    std::string epsilon = "zero";
    std::string expect;
    double ivp_tol = 1e-10;
  };
  auto cl = std::make_shared<ClassifyOpts>();
  auto* cc = g->add_subcommand("classify", "backward integration from a Cauchy state");
  cc->add_option("--a", cl->a, "a > 0")->required();
  cc->add_option("--b", cl->b, "b > 0")->required();
  cc->add_option("--c", cl->c, "c > 0")->required();
  cc->add_option("--epsilon", cl->epsilon, "zero, quadratic-bump or a JSON file")
      ->capture_default_str();
  cc->add_option("--expect", cl->expect, "required classification")
      ->check(CLI::IsMember({"case1", "case2", "case3-unstable-curve", "ambiguous"}));
  cc->add_option("--ivp-tol", cl->ivp_tol, "integrator tolerance")->capture_default_str();
  cc->callback([&ctx, cl] {
    ctx.command = "e2 classify";
    ctx.run = [&ctx, cl] {
      return classify(ctx, cl->a, cl->b, cl->c, cl->epsilon, cl->expect, cl->ivp_tol);
    };
  });
}

}  // namespace solab::cli
