#include <cmath>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "solab/e2_skew.hpp"
#include "solab/frame_json.hpp"

namespace solab::cli {

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : std::exp(a + (b - a) * i / (n - 1));
  if (n > 1) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

double parse_extended(const std::string& text, const std::string& name) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || std::isnan(v)) {
    throw std::invalid_argument(name + ": not a number: '" + text + "'");
  }
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> v;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo, hi, count;
    if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count) ||
        count.find(':') != std::string::npos) {
      throw std::invalid_argument("--tau-grid: expected lo:hi:count");
    }
    const double a = parse_extended(lo, "--tau-grid"), b = parse_extended(hi, "--tau-grid");
    const double c = parse_extended(count, "--tau-grid");
    if (!(c >= 1) || c != std::floor(c) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("--tau-grid: need finite ends and an integer count >= 1");
    }
    const int n = static_cast<int>(c);
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_extended(item, "--tau-grid"));
  if (v.empty()) throw std::invalid_argument("--tau-grid: empty");
  return v;
}

}  // namespace solab::cli

int main(int argc, char** argv) {
  using namespace solab::cli;
  CLI::App app{"solab: Kahler-Ricci soliton constructions, evaluated and checked"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Exit codes: 0 all checks passed, 1 a check failed or the computation broke down,\n"
      "2 usage error or malformed spec, 3 inadmissible epsilon profile.\n"
      "SOLAB_TOL overrides the default residual tolerance 1e-8; --tol overrides both.");
  Context ctx;
  app.add_option("--format", ctx.out.format, "main artifact format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output,-o", ctx.out.output, "main artifact path ('-' for stdout)")
      ->capture_default_str();
  app.add_option("--csv", ctx.out.csv, "also write the command's table as CSV here");
  app.add_option("--verdict", ctx.out.verdict, "also write the verdict JSON here");
  app.add_option("--tol", ctx.tol, "residual tolerance (default: SOLAB_TOL or 1e-8)");
  app.add_option("--seed", ctx.seed, "seed for randomized sampling")->capture_default_str();

  add_heisenberg_commands(app, ctx);
  add_e2_commands(app, ctx);
  add_frame_commands(app, ctx);
  add_steady_commands(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (!ctx.run) {
    std::cerr << app.help();
    return kUsage;
  }
  try {
    return ctx.run();
  } catch (const solab::e2::InadmissibleProfile& e) {
    emit_error(ctx.command, "inadmissible-epsilon:" + e.item(), e.what(), ctx.out);
    return kInadmissible;
  } catch (const solab::spec::SpecError& e) {
    emit_error(ctx.command, "malformed-spec", e.what(), ctx.out);
    return kUsage;
  } catch (const std::invalid_argument& e) {
    emit_error(ctx.command, "invalid-argument", e.what(), ctx.out);
    return kUsage;
  } catch (const std::exception& e) {
    emit_error(ctx.command, "computation-failed", e.what(), ctx.out);
    return kCheckFailed;
  }
}
