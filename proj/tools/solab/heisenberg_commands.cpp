#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "commands.hpp"
#include "solab/frame.hpp"
#include "solab/heisenberg.hpp"

namespace solab::cli {

namespace {

using heisenberg::HeisenbergSoliton;

double curvature_gap(const frame::CurvatureReport& a, const frame::CurvatureReport& b) {
  double m = std::max(std::abs(a.sec_kt - b.sec_kt), std::abs(a.ricci_kt - b.ricci_kt));
  m = std::max(m, std::abs(a.scalar - b.scalar));
  for (std::size_t i = 0; i < a.sec_xy.size(); ++i) {
    m = std::max({m, std::abs(a.sec_xy[i] - b.sec_xy[i]), std::abs(a.sec_kx[i] - b.sec_kx[i]),
                  std::abs(a.ricci_xy[i] - b.ricci_xy[i])});
  }
  return m;
}

json curvature_json(const frame::CurvatureReport& c) {
  return {{"sec_xy", c.sec_xy}, {"sec_kx", c.sec_kx}, {"sec_kt", c.sec_kt},
          {"ricci_xy", c.ricci_xy}, {"ricci_kt", c.ricci_kt}, {"scalar", c.scalar}};
}

void require_n(int n) {
  if (n < 1 || n > heisenberg::kMaxN) {
    throw std::invalid_argument("--n must lie in [1, " + std::to_string(heisenberg::kMaxN) + "]");
  }
}

int eval(Context& ctx, int n, double phi) {
  require_n(n);
  if (!(phi > 0)) throw std::invalid_argument("--phi must be > 0");
  const HeisenbergSoliton s(n);
  Report r(ctx.command);
  r.params() = {{"n", n}, {"phi", phi}};
  const auto m = heisenberg::metric_components(s, phi);
  const auto closed = heisenberg::curvatures(s, phi);
  const auto point = heisenberg::soliton_frame_point(s, phi);
  const auto engine = frame::curvature_at(point, {ctx.tolerance(), false});
  const auto res = frame::soliton_residuals(point);
  const auto hess = heisenberg::hessian_components(s, phi);
  json& d = r.data();
  d["F"] = heisenberg::F(n, phi);
  d["F_prime"] = heisenberg::F_prime(n, phi);
  d["F_second"] = heisenberg::F_second(n, phi);
  d["metric"] = {{"g_fiber", m.g_fiber}, {"g_zeta", m.g_zeta}, {"g_phiphi", m.g_phiphi}};
  d["tau"] = heisenberg::tau_of_phi(s, phi);
  d["curvature"] = curvature_json(closed);
  d["hessian"] = {{"xx", hess.xx}, {"kt", hess.kt}};
  d["soliton_residual"] = {{"skew", res.skew}, {"killing", res.killing_max},
                           {"identity3", res.identity3}};
  if (n == 1) {
    const auto op = heisenberg::dim4_operator(s, phi);
    d["dim4"] = {{"p", op.p}, {"q_mix", op.q_mix}, {"r", op.r},
                 {"eigenvalues", op.eigenvalues}, {"determinant", op.determinant},
                 {"determinant_identity", op.determinant_identity}};
    r.below("dim4-engine-vs-model", op.engine_deviation, ctx.tolerance());
  }
  const double tol = ctx.tolerance();
  r.below("curvature-engine-vs-closed-form", curvature_gap(engine, closed), tol);
  r.below("ricci-trace-vs-frame-formula", engine.ricci_mismatch, tol);
  r.below("soliton-skew-plus-killing", res.skew + res.killing_max, tol);
  r.above("F-positive", heisenberg::F(n, phi), 0.0);

  Table t;
  t.header = {"n", "phi", "F", "F_prime", "g_zeta", "g_phiphi", "sec_xy", "sec_kx", "sec_kt",
              "ricci_xy", "ricci_kt", "scalar"};
  t.rows.push_back({double(n), phi, heisenberg::F(n, phi), heisenberg::F_prime(n, phi), m.g_zeta,
                    m.g_phiphi, closed.sec_xy[0], closed.sec_kx[0], closed.sec_kt,
                    closed.ricci_xy[0], closed.ricci_kt, closed.scalar});
  return emit(r, t, ctx.out);
}

int verify(Context& ctx, int n, double lo, double hi, int samples) {
  require_n(n);
  if (!(lo > 0 && hi > lo) || samples < 2) {
    throw std::invalid_argument("need 0 < --phi-min < --phi-max and --samples >= 2");
  }
  const HeisenbergSoliton s(n);
  Report r(ctx.command);
  r.params() = {{"n", n}, {"phi_min", lo}, {"phi_max", hi}, {"samples", samples}};
  Table t;
  t.header = {"phi", "skew", "killing", "identity3", "kahler", "ricci_mismatch", "sol_eqns",
              "skew_tensor", "killing_defect"};
  double soliton = 0, id3 = 0, kahler = 0, ricci = 0, full = 0, tensor = 0, defect = 0;
  for (double phi : logspace(lo, hi, samples)) {
    const auto p = heisenberg::soliton_frame_point(s, phi);
    const auto res = frame::soliton_residuals(p);
    const auto cr = frame::curvature_at(p, {ctx.tolerance(), false});
    const double k = frame::kahler_residual(p);
    const double f = frame::full_sol_eqns_residual(p);
    const double st = frame::skew_soliton_tensor_residual(p);
    const double kd = frame::killing_defect(p);
    soliton = std::max(soliton, res.skew + res.killing_max);
    id3 = std::max(id3, res.identity3);
    kahler = std::max(kahler, k);
    ricci = std::max(ricci, cr.ricci_mismatch);
    full = std::max(full, f);
    tensor = std::max(tensor, st);
    defect = std::max(defect, kd);
    t.rows.push_back({phi, res.skew, res.killing_max, res.identity3, k, cr.ricci_mismatch, f, st, kd});
  }
  const double tol = ctx.tolerance();
  r.data() = {{"max_soliton_residual", soliton}, {"max_identity3", id3}, {"max_kahler", kahler},
              {"max_ricci_mismatch", ricci}, {"max_sol_eqns", full},
              {"max_skew_tensor", tensor}, {"max_killing_defect", defect}};
  r.below("soliton-skew-plus-killing", soliton, tol);
  r.below("identity3", id3, tol);
  r.below("kahler-relations", kahler, tol);
  r.below("ricci-trace-vs-frame-formula", ricci, tol);
  r.below("full-soliton-equations", full, tol);
  r.below("skew-soliton-tensor", tensor, tol);
  r.below("killing-defect", defect, tol);
  return emit(r, t, ctx.out);
}

int curvature(Context& ctx, int n, double lo, double hi, int samples) {
  require_n(n);
  if (!(lo > 0 && hi > lo) || samples < 2) {
    throw std::invalid_argument("need 0 < --phi-min < --phi-max and --samples >= 2");
  }
  const HeisenbergSoliton s(n);
  const double m = n + 1;
  Report r(ctx.command);
  r.params() = {{"n", n}, {"phi_min", lo}, {"phi_max", hi}, {"samples", samples}};
  Table t;
  t.header = {"phi", "sec_xy", "sec_kx", "sec_kt", "ricci_xy", "ricci_kt", "scalar"};
  if (n == 1) {
    for (const char* h : {"p", "q_mix", "r", "determinant", "determinant_identity"}) {
      t.header.push_back(h);
    }
  }
  double ric_min = std::numeric_limits<double>::infinity(), ric_max = -ric_min;
  double scal_min = ric_min, scal_max = -ric_min, gap = 0, det_gap = 0, model_gap = 0;
  for (double phi : logspace(lo, hi, samples)) {
    const auto c = heisenberg::curvatures(s, phi);
    const auto e = frame::curvature_at(heisenberg::soliton_frame_point(s, phi),
                                       {ctx.tolerance(), false});
    gap = std::max(gap, curvature_gap(c, e));
    for (double v : c.ricci_xy) {
      ric_min = std::min(ric_min, v);
      ric_max = std::max(ric_max, v);
    }
    ric_min = std::min(ric_min, c.ricci_kt);
    ric_max = std::max(ric_max, c.ricci_kt);
    scal_min = std::min(scal_min, c.scalar);
    scal_max = std::max(scal_max, c.scalar);
    std::vector<double> row{phi, c.sec_xy[0], c.sec_kx[0], c.sec_kt, c.ricci_xy[0], c.ricci_kt,
                            c.scalar};
    if (n == 1) {
      const auto op = heisenberg::dim4_operator(s, phi);
      det_gap = std::max(det_gap, std::abs(op.determinant - op.determinant_identity));
      model_gap = std::max(model_gap, op.engine_deviation);
      row.insert(row.end(), {op.p, op.q_mix, op.r, op.determinant, op.determinant_identity});
    }
    t.rows.push_back(std::move(row));
  }
  r.data() = {{"ricci_min", ric_min}, {"ricci_max", ric_max}, {"scalar_min", scal_min},
              {"scalar_max", scal_max}, {"engine_gap", gap}};
  r.inside("ricci-min-in(-1,0)", ric_min, -1.0, 0.0);
  r.inside("ricci-max-in(-1,0)", ric_max, -1.0, 0.0);
  r.inside("scalar-min-in(-2m,0)", scal_min, -2.0 * m, 0.0);
  r.inside("scalar-max-in(-2m,0)", scal_max, -2.0 * m, 0.0);
  r.below("curvature-engine-vs-closed-form", gap, ctx.tolerance());
  if (n == 1) {
    r.data()["determinant_identity_gap"] = det_gap;
    r.data()["dim4_engine_vs_model"] = model_gap;
    r.below("determinant-identity", det_gap, 1e-10);
    r.below("dim4-engine-vs-model", model_gap, ctx.tolerance());
  }
  return emit(r, t, ctx.out);
}

json distance_json(const heisenberg::DistanceResult& d) {
  return {{"verdict", d.verdict == numerics::Verdict::converges ? "converges" : "diverges"},
          {"value", d.value}, {"growth_exponent", d.growth_exponent}};
}

int distance(Context& ctx, int n, const std::string& a, const std::string& b) {
  require_n(n);
  const double phi0 = parse_extended(a, "--phi0"), phi1 = parse_extended(b, "--phi1");
  if (!(phi0 >= 0 && phi1 > phi0)) throw std::invalid_argument("need 0 <= --phi0 < --phi1 <= inf");
  const HeisenbergSoliton s(n);
  Report r(ctx.command);
  r.params() = {{"n", n}, {"phi0", a}, {"phi1", b}};
  const auto d = heisenberg::distance(s, phi0, phi1);
  const auto g = heisenberg::gradient_flow_time(s, phi0, phi1);
  r.data() = {{"distance", distance_json(d)}, {"gradient_flow_time", distance_json(g)}};
  const bool limit = phi0 == 0 || std::isinf(phi1);
  if (limit) {
    r.flag("distance-diverges", d.verdict == numerics::Verdict::diverges,
           d.verdict == numerics::Verdict::diverges ? "diverges" : "converges");
    r.flag("gradient-flow-time-diverges", g.verdict == numerics::Verdict::diverges,
           g.verdict == numerics::Verdict::diverges ? "diverges" : "converges");
  } else {
    const double lower = std::sqrt(2.0) * (std::sqrt(phi1) - std::sqrt(phi0));
    const double flow_lower = 0.5 * std::log(phi1 / phi0);
    r.data()["distance_lower_bound"] = lower;
    r.data()["flow_time_lower_bound"] = flow_lower;
    r.above("distance-exceeds-lower-bound", d.value, lower);
    r.above("flow-time-exceeds-half-log", g.value, flow_lower);
  }
  return emit(r, std::nullopt, ctx.out);
}

int bounds(Context& ctx, int n, int samples, int grid, double lo, double hi) {
  if (n != 1) throw std::invalid_argument("heisenberg bounds: only n = 1 (dimension four)");
  if (samples < 1 || grid < 2 || !(lo > 0 && hi > lo)) {
    throw std::invalid_argument("need --samples >= 1, --grid >= 2, 0 < --phi-min < --phi-max");
  }
  Report r(ctx.command);
  r.params() = {{"n", n}, {"samples", samples}, {"grid", grid}, {"phi_min", lo},
                {"phi_max", hi}, {"seed", ctx.seed}};
  const auto e = heisenberg::sec_extremes_dim4(logspace(lo, hi, grid), samples, ctx.seed);
  r.data() = {{"inf", e.inf}, {"sup", e.sup}, {"phi_at_inf", e.phi_at_inf},
              {"phi_at_sup", e.phi_at_sup}};
  r.above("sec-inf-above-minus-two-thirds", e.inf, -2.0 / 3.0);
  r.below("sec-sup-below-zero", e.sup, 0.0);
  return emit(r, std::nullopt, ctx.out);
}

}  // namespace

void add_heisenberg_commands(CLI::App& app, Context& ctx) {
  auto* g = app.add_subcommand("heisenberg", "explicit expanding solitons on Heisenberg groups");
  g->require_subcommand(1);
  g->fallthrough();

  struct Opts {
    int n = 1;
    double phi = 1;
    double lo = 0.01, hi = 50;
    int samples = 200;
    std::string phi0 = "1", phi1 = "4";
    int grid = 60;
  };
  auto o = std::make_shared<Opts>();

  auto* ev = g->add_subcommand("eval", "closed-form and engine values at one phi");
  ev->add_option("--n", o->n, "group parameter n (dimension 2n+2)")->capture_default_str();
  ev->add_option("--phi", o->phi, "phi > 0")->required();
  ev->callback([&ctx, o] {
    ctx.command = "heisenberg eval";
    ctx.run = [&ctx, o] { return eval(ctx, o->n, o->phi); };
  });

  auto* ve = g->add_subcommand("verify", "soliton residuals over a log-spaced phi grid");
  ve->add_option("--n", o->n, "group parameter n")->capture_default_str();
  ve->add_option("--phi-min", o->lo, "smallest phi")->capture_default_str();
  ve->add_option("--phi-max", o->hi, "largest phi")->capture_default_str();
  ve->add_option("--samples", o->samples, "grid size")->capture_default_str();
  ve->callback([&ctx, o] {
    ctx.command = "heisenberg verify";
    ctx.run = [&ctx, o] { return verify(ctx, o->n, o->lo, o->hi, o->samples); };
  });

  auto* cu = g->add_subcommand("curvature", "curvature table and Ricci/scalar pinching");
  auto co = std::make_shared<Opts>();
  co->lo = 1e-3;
  co->hi = 1e3;
  co->samples = 60;
  cu->add_option("--n", co->n, "group parameter n")->capture_default_str();
  cu->add_option("--phi-min", co->lo, "smallest phi")->capture_default_str();
  cu->add_option("--phi-max", co->hi, "largest phi")->capture_default_str();
  cu->add_option("--samples", co->samples, "grid size")->capture_default_str();
  cu->callback([&ctx, co] {
    ctx.command = "heisenberg curvature";
    ctx.run = [&ctx, co] { return curvature(ctx, co->n, co->lo, co->hi, co->samples); };
  });

  auto* di = g->add_subcommand("distance", "orbit-normal distance and gradient-flow time");
  di->add_option("--n", o->n, "group parameter n")->capture_default_str();
  di->add_option("--phi0", o->phi0, "lower end (0 allowed)")->capture_default_str();
  di->add_option("--phi1", o->phi1, "upper end (inf allowed)")->capture_default_str();
  di->callback([&ctx, o] {
    ctx.command = "heisenberg distance";
    ctx.run = [&ctx, o] { return distance(ctx, o->n, o->phi0, o->phi1); };
  });

  auto* bo = g->add_subcommand("bounds", "sampled sectional curvature of decomposable forms (n = 1)");
  auto bo_o = std::make_shared<Opts>();
  bo_o->samples = 100000;
  bo_o->lo = 1e-3;
  bo_o->hi = 1e3;
  bo->add_option("--n", bo_o->n, "group parameter n (only 1)")->capture_default_str();
  bo->add_option("--samples", bo_o->samples, "forms per phi")->capture_default_str();
  bo->add_option("--grid", bo_o->grid, "phi grid size")->capture_default_str();
  bo->add_option("--phi-min", bo_o->lo, "smallest phi")->capture_default_str();
  bo->add_option("--phi-max", bo_o->hi, "largest phi")->capture_default_str();
  bo->callback([&ctx, bo_o] {
    ctx.command = "heisenberg bounds";
    ctx.run = [&ctx, bo_o] {
      return bounds(ctx, bo_o->n, bo_o->samples, bo_o->grid, bo_o->lo, bo_o->hi);
    };
  });
}

}  // namespace solab::cli
