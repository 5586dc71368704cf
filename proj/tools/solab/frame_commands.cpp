#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "solab/frame.hpp"
#include "solab/frame_json.hpp"

namespace solab::cli {

namespace {

struct CheckOpts {
  std::string spec;
  std::string grid = "-1:1:21";
  std::string checks = "kahler,skew,curvature";
};

std::set<std::string> split_checks(const std::string& text) {
  static const std::set<std::string> known{"kahler", "skew", "killing", "curvature",
                                           "integrability"};
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!known.count(item)) throw std::invalid_argument("--checks: unknown group '" + item + "'");
    out.insert(item);
  }
  if (out.empty()) throw std::invalid_argument("--checks: empty");
  return out;
}

int check(Context& ctx, const CheckOpts& o) {
  const auto groups = split_checks(o.checks);
  const auto grid = parse_grid(o.grid);
  const auto fs = spec::load_frame_spec_file(o.spec);
  const double tol = ctx.tolerance();
  Report r(ctx.command);
  r.params() = {{"spec", o.spec}, {"tau_grid", o.grid}, {"checks", o.checks}};
  r.data()["family"] = fs.family();
  r.data()["n"] = fs.n();
  r.data()["lambda"] = fs.lambda();
  Table t;
  t.header = {"tau", "rels2", "closed_two", "closed_three", "integrability", "skew",
              "skew_scaled", "killing", "identity3", "ricci_mismatch"};
  double rels2 = 0, two = 0, three = 0, integ = 0, skew = 0, kill = 0, id3 = 0, ricci = 0;
  for (double tau : grid) {
    const auto p = fs.at(tau);
    const auto k = frame::kahler_residuals(p);
    const double in = frame::integrability_residual(p);
    const auto s = frame::soliton_residuals(p);
    const auto c = frame::curvature_at(p, {tol, false});
    rels2 = std::max(rels2, k.rels2);
    two = std::max(two, k.closed_two);
    three = std::max(three, k.closed_three);
    integ = std::max(integ, in);
    skew = std::max(skew, s.skew_scaled);
    kill = std::max(kill, s.killing_max);
    id3 = std::max(id3, s.identity3);
    ricci = std::max(ricci, c.ricci_mismatch);
    t.rows.push_back({tau, k.rels2, k.closed_two, k.closed_three, in, s.skew, s.skew_scaled,
                      s.killing_max, s.identity3, c.ricci_mismatch});
  }
  r.data()["max"] = {{"rels2", rels2}, {"closed_two", two}, {"closed_three", three},
                     {"integrability", integ}, {"skew", skew}, {"killing", kill},
                     {"identity3", id3}, {"ricci_mismatch", ricci}};
  if (groups.count("kahler")) {
    r.below("rels2", rels2, tol);
    r.below("closed-two-subbundles", two, tol);
    r.below("closed-three-subbundles", three, tol);
  }
  if (groups.count("integrability")) r.below("integrability", integ, tol);
  if (groups.count("skew")) {
    r.below("skew-soliton-equations", skew, tol);
    r.below("identity3", id3, tol);
  }
  if (groups.count("killing")) r.below("killing-conditions", kill, tol);
  if (groups.count("curvature")) r.below("ricci-trace-vs-frame-formula", ricci, tol);
  return emit(r, t, ctx.out);
}

}  // namespace

void add_frame_commands(CLI::App& app, Context& ctx) {
  auto* g = app.add_subcommand("frame", "frame structures loaded from JSON");
  g->require_subcommand(1);
  g->fallthrough();
  auto o = std::make_shared<CheckOpts>();
  auto* c = g->add_subcommand("check", "Kahler, soliton and curvature residuals on a tau grid");
  c->add_option("--spec", o->spec, "frame spec JSON (see docs/frame_spec.md)")->required();
  c->add_option("--tau-grid", o->grid, "lo:hi:count or a comma list")->capture_default_str();
  c->add_option("--checks", o->checks,
                "comma list of kahler, skew, killing, curvature, integrability")
      ->capture_default_str();
  c->callback([&ctx, o] {
    ctx.command = "frame check";
    ctx.run = [&ctx, o] { return check(ctx, *o); };
  });
}

}  // namespace solab::cli
