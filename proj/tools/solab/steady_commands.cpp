#include <algorithm>
#include <cmath>
#include <memory>

#include "commands.hpp"
#include "solab/frame.hpp"
#include "solab/steady.hpp"

namespace solab::cli {

namespace {

struct SteadyArgs {
  double k = 1, beta = 1, k1 = 1, k2 = -1;
  std::vector<double> ell{1.0};
  std::vector<double> a;
};

steady::SteadyII make(const SteadyArgs& s) {
  return steady::make_steady_ii(s.k, s.beta, s.k1, s.k2, s.ell, s.a);
}

json params_json(const SteadyArgs& s) {
  return {{"k", s.k}, {"beta", s.beta}, {"k1", s.k1}, {"k2", s.k2}, {"ell", s.ell}, {"a", s.a}};
}

json end_json(const steady::EndReport& e) {
  return {{"t_limit", e.t_limit}, {"finite", e.finite}, {"length", e.length},
          {"closed_form", e.closed_form}};
}

json verdict_json(const steady::IncompletenessReport& v) {
  return {{"verdict", v.verdict}, {"t_ref", v.t_ref}, {"lower", end_json(v.lower)},
          {"upper", end_json(v.upper)}, {"note", v.note}};
}

// Interior sample points: distances 0.1/|k1| .. 5/|k1| from a finite
// boundary, or [-2, 2]/|k1| without one.
std::vector<double> interior_samples(const steady::SteadyII& p, int count) {
  std::vector<double> t;
  const double w = 1.0 / std::abs(p.k1);
  for (int i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.5 : double(i) / (count - 1);
    if (p.boundary) {
      const double dist = w * 0.1 * std::pow(50.0, u);
      t.push_back(std::isinf(p.t_hi) ? *p.boundary + dist : *p.boundary - dist);
    } else {
      t.push_back(w * (-2.0 + 4.0 * u));
    }
  }
  std::sort(t.begin(), t.end());
  return t;
}

int eval(Context& ctx, const SteadyArgs& s, int samples, int profile_samples) {
  const auto p = make(s);
  Report r(ctx.command);
  r.params() = params_json(s);
  r.params()["samples"] = samples;
  r.data()["interval"] = {p.t_lo, p.t_hi};
  r.data()["a"] = p.a;
  if (p.boundary) r.data()["boundary"] = *p.boundary;
  const auto ts = interior_samples(p, samples);
  double ii = 0, skew = 0, kill = 0, kahler = 0, ricci = 0;
  bool case_two = true;
  json pts = json::array();
  for (double t : ts) {
    const double res = steady::ii_simple_residual_fd(p, t);
    const auto fp = steady::frame_point(p, t);
    const auto sr = frame::soliton_residuals(fp);
    const auto cr = frame::curvature_at(fp, {ctx.tolerance(), false});
    ii = std::max(ii, std::abs(res));
    skew = std::max(skew, sr.skew);
    kill = std::max(kill, sr.killing_max);
    kahler = std::max(kahler, frame::kahler_residual(fp));
    ricci = std::max(ricci, cr.ricci_mismatch);
    case_two = case_two && steady::case_split(fp) == steady::SteadyCase::II;
    pts.push_back({{"t", t}, {"c", steady::c_of_t(p, t)}, {"ii_simple_residual", res}});
  }
  r.data()["samples"] = pts;
  r.data()["max"] = {{"ii_simple_residual", ii}, {"skew", skew}, {"killing", kill},
                     {"kahler", kahler}, {"ricci_mismatch", ricci}};
  const auto v = steady::incompleteness_verdict(p);
  r.data()["incompleteness"] = verdict_json(v);
  const double tol = ctx.tolerance();
  r.below("ii-simple-fd-residual", ii, 1e-6);
  r.below("steady-skew-residual", skew, tol);
  r.below("killing-conditions", kill, tol);
  r.below("kahler-relations", kahler, tol);
  r.below("ricci-trace-vs-frame-formula", ricci, tol);
  r.flag("case-split-II", case_two, case_two ? "II" : "not II");

  Table t;
  t.header = {"t", "c", "length"};
  for (const auto& row : steady::profile(p, ts.front(), ts.back(), profile_samples)) {
    t.rows.push_back({row.t, row.c, row.length});
  }
  return emit(r, t, ctx.out);
}

int length(Context& ctx, const SteadyArgs& s, const std::string& a, const std::string& b,
           double tol) {
  const auto p = make(s);
  const double t0 = parse_extended(a, "--t0"), t1 = parse_extended(b, "--t1");
  Report r(ctx.command);
  r.params() = params_json(s);
  r.params()["t0"] = a;
  r.params()["t1"] = b;
  r.data()["interval"] = {p.t_lo, p.t_hi};
  if (p.boundary) r.data()["boundary"] = *p.boundary;
  const double quad = steady::normal_geodesic_length_quadrature(p, t0, t1);
  r.data()["quadrature"] = quad;
  if (p.closed_form_length_admissible()) {
    const double closed = steady::normal_geodesic_length(p, t0, t1);
    r.data()["closed_form"] = closed;
    r.data()["difference"] = std::abs(closed - quad);
    r.near("closed-form-vs-quadrature", closed, quad, tol);
  } else {
    r.data()["closed_form"] = nullptr;
    r.data()["closed_form_note"] = "tanh^-1 argument leaves (0, 1): needs k k1 > 0 and k2 < 0";
  }
  r.above("length-finite-positive", quad, 0.0);
  const auto v = steady::incompleteness_verdict(p);
  r.data()["incompleteness"] = verdict_json(v);
  return emit(r, std::nullopt, ctx.out);
}

void steady_options(CLI::App* c, SteadyArgs& s) {
  c->add_option("--k", s.k, "constant in f' = k alpha c")->capture_default_str();
  c->add_option("--beta", s.beta, "beta = prod(l_i a_i^2) > 0")->capture_default_str();
  c->add_option("--k1", s.k1, "integration constant, nonzero")->capture_default_str();
  c->add_option("--k2", s.k2, "integration constant")->capture_default_str();
  c->add_option("--ell", s.ell, "ratios l_i = b_i/a_i")->capture_default_str();
  c->add_option("--a", s.a, "constants a_i (default: from beta)");
}

}  // namespace

void add_steady_commands(CLI::App& app, Context& ctx) {
  auto* g = app.add_subcommand("steady", "steady case-II solitons");
  g->require_subcommand(1);
  g->fallthrough();

  struct EvalOpts {
    SteadyArgs s;
    int samples = 10;
    int profile = 101;
  };
  auto eo = std::make_shared<EvalOpts>();
  auto* ev = g->add_subcommand("eval", "closed form, equation residuals and incompleteness");
  steady_options(ev, eo->s);
  ev->add_option("--samples", eo->samples, "interior check points")->capture_default_str();
  ev->add_option("--profile-samples", eo->profile, "rows of the (t, c, length) CSV")
      ->capture_default_str();
  ev->callback([&ctx, eo] {
    ctx.command = "steady eval";
    ctx.run = [&ctx, eo] { return eval(ctx, eo->s, eo->samples, eo->profile); };
  });

  struct LengthOpts {
    SteadyArgs s;
    std::string t0 = "-5", t1 = "-0.01";
    double tol = 1e-6;
  };
  auto lo = std::make_shared<LengthOpts>();
  auto* le = g->add_subcommand("length", "orbit-normal geodesic length: closed form vs quadrature");
  steady_options(le, lo->s);
  le->add_option("--t0", lo->t0, "start")->capture_default_str();
  le->add_option("--t1", lo->t1, "end (may sit on the boundary)")->capture_default_str();
  le->add_option("--agreement-tol", lo->tol, "closed form vs quadrature")->capture_default_str();
  le->callback([&ctx, lo] {
    ctx.command = "steady length";
    ctx.run = [&ctx, lo] { return length(ctx, lo->s, lo->t0, lo->t1, lo->tol); };
  });
}

}  // namespace solab::cli
