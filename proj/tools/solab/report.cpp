#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace solab::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no inf/nan; they are written as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

void write_to(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
    out << '\n';
  }
}

void Report::add(json check) { checks_.push_back(std::move(check)); }

void Report::below(const std::string& name, double value, double bound) {
  add({{"check", name}, {"value", num(value)}, {"bound", num(bound)}, {"tolerance", nullptr},
       {"relation", "<"}, {"pass", value < bound}});
}

void Report::above(const std::string& name, double value, double bound) {
  add({{"check", name}, {"value", num(value)}, {"bound", num(bound)}, {"tolerance", nullptr},
       {"relation", ">"}, {"pass", value > bound}});
}

void Report::near(const std::string& name, double value, double target, double tol) {
  add({{"check", name}, {"value", num(value)}, {"bound", num(target)}, {"tolerance", num(tol)},
       {"relation", "~"}, {"pass", std::abs(value - target) <= tol}});
}

void Report::inside(const std::string& name, double value, double lo, double hi) {
  add({{"check", name}, {"value", num(value)}, {"bound", {num(lo), num(hi)}},
       {"tolerance", nullptr}, {"relation", "in"}, {"pass", value > lo && value < hi}});
}

void Report::flag(const std::string& name, bool ok, const std::string& detail) {
  add({{"check", name}, {"value", detail}, {"bound", nullptr}, {"tolerance", nullptr},
       {"relation", "holds"}, {"pass", ok}});
}

bool Report::pass() const {
  for (const auto& c : checks_) {
    if (!c.at("pass").get<bool>()) return false;
  }
  return true;
}

json Report::to_json() const {
  // Replace non-finite numbers in the free-form sections too.
  std::function<json(const json&)> clean = [&](const json& j) -> json {
    if (j.is_number_float()) return num(j.get<double>());
    if (j.is_object()) {
      json o = json::object();
      for (auto it = j.begin(); it != j.end(); ++it) o[it.key()] = clean(it.value());
      return o;
    }
    if (j.is_array()) {
      json a = json::array();
      for (const auto& x : j) a.push_back(clean(x));
      return a;
    }
    return j;
  };
  return {{"command", command_}, {"params", clean(params_)}, {"data", clean(data_)},
          {"checks", checks_}, {"pass", pass()}};
}

int emit(const Report& r, const std::optional<Table>& table, const Output& o) {
  const std::string verdict = r.to_json().dump(2) + "\n";
  if (o.format == "csv") {
    if (!table) throw std::invalid_argument("this command has no CSV table");
    std::ostringstream ss;
    table->write_csv(ss);
    write_to(o.output, ss.str());
  } else {
    write_to(o.output, verdict);
  }
  if (!o.verdict.empty()) write_to(o.verdict, verdict);
  if (!o.csv.empty()) {
    if (!table) throw std::invalid_argument("this command has no CSV table");
    std::ostringstream ss;
    table->write_csv(ss);
    write_to(o.csv, ss.str());
  }
  return r.pass() ? kPass : kCheckFailed;
}

void emit_error(const std::string& command, const std::string& kind, const std::string& what,
                const Output& o) {
  const json j = {{"command", command},
                  {"error", {{"kind", kind}, {"message", what}}},
                  {"pass", false}};
  const std::string text = j.dump(2) + "\n";
  if (o.format == "json" && o.output != "-") {
    try {
      write_to(o.output, text);
    } catch (const std::exception&) {
    }
  }
  std::cout << text;
}

double default_tolerance(std::optional<double> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SOLAB_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
      throw std::invalid_argument(std::string("SOLAB_TOL is not a positive number: ") + env);
    }
    return v;
  }
  return 1e-8;
}

}  // namespace solab::cli
