#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"

namespace solab::cli {

struct Context {
  Output out;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string command;     // "group sub", set by the selected subcommand
  std::function<int()> run;

  double tolerance() const { return default_tolerance(tol); }
};

void add_heisenberg_commands(CLI::App& app, Context& ctx);
void add_e2_commands(CLI::App& app, Context& ctx);
void add_frame_commands(CLI::App& app, Context& ctx);
void add_steady_commands(CLI::App& app, Context& ctx);

// n points geometrically spaced over [lo, hi] (lo, hi > 0).
std::vector<double> logspace(double lo, double hi, int n);
// "lo:hi:count" (linear) or "a,b,c".
std::vector<double> parse_grid(const std::string& text);
// Number that may be written as "inf" or "-inf".
double parse_extended(const std::string& text, const std::string& name);

}  // namespace solab::cli
