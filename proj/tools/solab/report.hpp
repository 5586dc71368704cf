#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace solab::cli {

using nlohmann::json;

enum ExitCode { kPass = 0, kCheckFailed = 1, kUsage = 2, kInadmissible = 3 };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // '.' decimal point, '\n' line ends, header row, %.17g values.
  void write_csv(std::ostream& out) const;
};

// Verdict document {command, params, data, checks: [{check, value, bound,
// tolerance, pass}], pass}.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  json& params() { return params_; }
  json& data() { return data_; }

  // value < bound
  void below(const std::string& name, double value, double bound);
  // value > bound
  void above(const std::string& name, double value, double bound);
  // |value - target| <= tol
  void near(const std::string& name, double value, double target, double tol);
  // lo < value < hi
  void inside(const std::string& name, double value, double lo, double hi);
  void flag(const std::string& name, bool ok, const std::string& detail);

  bool pass() const;
  json to_json() const;

 private:
  void add(json check);

  std::string command_;
  json params_ = json::object();
  json data_ = json::object();
  json checks_ = json::array();
};

// Global output options shared by every subcommand.
struct Output {
  std::string format = "json";  // "json" or "csv"
  std::string output = "-";     // main artifact; '-' is stdout
  std::string csv;              // optional extra CSV file for the table
  std::string verdict;          // optional verdict JSON file (useful with --format csv)
};

// Writes the verdict and table per `o` and returns kPass or kCheckFailed.
int emit(const Report& r, const std::optional<Table>& table, const Output& o);

// Failure record for an exception; written to stdout as JSON.
void emit_error(const std::string& command, const std::string& kind, const std::string& what,
                const Output& o);

// Default residual tolerance: --tol when given, else SOLAB_TOL, else 1e-8.
double default_tolerance(std::optional<double> flag);

}  // namespace solab::cli
