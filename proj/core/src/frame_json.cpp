#include "solab/frame_json.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "solab/expression.hpp"
#include "solab/heisenberg.hpp"
#include "solab/steady.hpp"

namespace solab::spec {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SpecError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw SpecError(where + ": unknown key '" + it.key() + "'");
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw SpecError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw SpecError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::vector<double> numbers_or(const json& j, const std::string& key, std::vector<double> fallback,
                               const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& a = j.at(key);
  if (!a.is_array()) throw SpecError(where + ": '" + key + "' must be an array");
  std::vector<double> v;
  for (const auto& x : a) {
    if (!x.is_number()) throw SpecError(where + ": '" + key + "' must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

expr::Expression expression(const json& j, const std::string& var, const std::string& where) {
  if (j.is_number()) return expr::Expression::parse(j.dump(), var);
  if (!j.is_string()) throw SpecError(where + ": expected an expression string or number");
  try {
    return expr::Expression::parse(j.get<std::string>(), var);
  } catch (const expr::ExpressionError& e) {
    throw SpecError(where + ": " + e.what());
  }
}

e2::EpsilonProfile epsilon_from_json(const json& j) {
  if (j.is_string()) return epsilon_from_argument(j.get<std::string>());
  const std::string where = "epsilon";
  reject_unknown(j, {"builtin", "beta", "name", "expression", "even_polynomial"}, where);
  if (j.contains("builtin")) {
    const std::string b = j.at("builtin").get<std::string>();
    if (b == "zero") return e2::EpsilonProfile::zero();
    if (b == "quadratic-bump") return e2::EpsilonProfile::quadratic_bump();
    if (b == "poly") return e2::EpsilonProfile::poly(number(j, "beta", where));
    throw SpecError(where + ": unknown builtin '" + b + "'");
  }
  const std::string name = j.value("name", std::string("custom"));
  if (j.contains("expression")) {
    auto e = std::make_shared<const expr::Expression>(
        expression(j.at("expression"), "b", where + ".expression"));
    return {name, [e](double b) { return (*e)(b); }, [e](double b) { return e->jet(b).d1; }};
  }
  if (j.contains("even_polynomial")) {
    return e2::EpsilonProfile::even_polynomial(numbers_or(j, "even_polynomial", {}, where), name);
  }
  throw SpecError(where + ": need 'builtin', 'expression' or 'even_polynomial'");
}

struct FamilyFrame {
  int n;
  double lambda;
  std::shared_ptr<const frame::FrameStructure> fs;
};

FamilyFrame family_from_json(const json& j) {
  const std::string where = "family";
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
    throw SpecError(where + ": need an object with a 'name'");
  }
  const std::string name = j.at("name").get<std::string>();
  auto wrap = [](frame::FrameStructure fs) {
    const int n = fs.n();
    const double lam = fs.lambda();
    return FamilyFrame{n, lam, std::make_shared<const frame::FrameStructure>(std::move(fs))};
  };
  if (name == "heisenberg" || name == "heisenberg-cone" || name == "heisenberg-cusp") {
    reject_unknown(j, {"name", "n"}, where);
    const double nd = number_or(j, "n", 1, where);
    const int n = static_cast<int>(nd);
    if (n != nd || n < 1 || n > heisenberg::kMaxN) {
      throw SpecError(where + ": 'n' must be an integer in [1, " +
                      std::to_string(heisenberg::kMaxN) + "]");
    }
    if (name == "heisenberg") return wrap(heisenberg::soliton_frame(heisenberg::HeisenbergSoliton(n)));
    return wrap(heisenberg::model_frame(
        n, name == "heisenberg-cone" ? heisenberg::AsymptoticEnd::cone
                                     : heisenberg::AsymptoticEnd::cusp));
  }
  if (name == "e2") {
    reject_unknown(j, {"name", "q", "delta", "epsilon", "b_max"}, where);
    const auto eps = epsilon_from_json(j.value("epsilon", json("zero")));
    e2::require_admissible(eps);
    e2::ShootOptions o;
    o.b_max = number_or(j, "b_max", o.b_max, where);
    const auto traj = e2::shoot_unstable(number_or(j, "q", 1.0, where), eps,
                                         number_or(j, "delta", 1e-8, where), {}, o);
    return wrap(e2::e2_frame(traj));
  }
  if (name == "steady-II") {
    reject_unknown(j, {"name", "k", "beta", "k1", "k2", "ell", "a"}, where);
    try {
      const auto p = steady::make_steady_ii(
          number(j, "k", where), number(j, "beta", where), number(j, "k1", where),
          number(j, "k2", where), numbers_or(j, "ell", {1.0}, where), numbers_or(j, "a", {}, where));
      return wrap(steady::steady_frame(p));
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const SpecError*>(&e)) throw;
      throw SpecError(where + ": " + e.what());
    }
  }
  throw SpecError(where + ": unknown family '" + name + "'");
}

// One coefficient slot: an expression in tau, a family's coefficient, or
// left to the base.
struct Source {
  std::optional<expr::Expression> e;
  std::shared_ptr<const frame::FrameStructure> fam;
};

std::vector<double>& slot(frame::Coefficients& c, char name) {
  switch (name) {
    case 'A': return c.A;
    case 'B': return c.B;
    case 'C': return c.C;
    case 'D': return c.D;
    case 'E': return c.E;
    case 'F': return c.F;
    case 'G': return c.G;
    case 'H': return c.H;
    default: return c.N;
  }
}

const std::vector<double>& slot(const frame::Coefficients& c, char name) {
  return slot(const_cast<frame::Coefficients&>(c), name);
}

struct Perturbation {
  char name;
  int index;  // 0-based; ignored for L
  double value, derivative;
};

struct Spec {
  int n = 0;
  double lambda = 0;
  std::shared_ptr<const frame::FrameStructure> base;
  std::map<char, std::vector<Source>> indexed;
  std::optional<Source> L;
  std::optional<expr::Expression> f_first, f_second;
  std::vector<Perturbation> perturb;
  std::string name;

  frame::FramePoint at(double tau) const {
    frame::FramePoint p = base ? base->at(tau) : frame::FramePoint(n);
    p.tau = tau;
    p.lambda = lambda;
    std::map<const frame::FrameStructure*, frame::FramePoint> cache;
    auto from_family = [&](const Source& s) -> const frame::FramePoint& {
      auto it = cache.find(s.fam.get());
      if (it == cache.end()) it = cache.emplace(s.fam.get(), s.fam->at(tau)).first;
      return it->second;
    };
    for (const auto& [name, sources] : indexed) {
      for (int i = 0; i < n; ++i) {
        const Source& s = sources[i];
        if (s.e) {
          const auto j = s.e->jet(tau);
          slot(p.value, name)[i] = j.v;
          slot(p.deriv, name)[i] = j.d1;
        } else if (s.fam) {
          const auto& q = from_family(s);
          slot(p.value, name)[i] = slot(q.value, name)[i];
          slot(p.deriv, name)[i] = slot(q.deriv, name)[i];
        }
      }
    }
    if (L) {
      if (L->e) {
        const auto j = L->e->jet(tau);
        p.value.L = j.v;
        p.deriv.L = j.d1;
      } else {
        const auto& q = from_family(*L);
        p.value.L = q.value.L;
        p.deriv.L = q.deriv.L;
      }
    }
    if (f_first) {
      const auto j = f_first->jet(tau);
      p.f1 = j.v;
      p.f2 = f_second ? (*f_second)(tau) : j.d1;
    }
    for (const auto& d : perturb) {
      if (d.name == 'L') {
        p.value.L += d.value;
        p.deriv.L += d.derivative;
      } else {
        slot(p.value, d.name)[d.index] += d.value;
        slot(p.deriv, d.name)[d.index] += d.derivative;
      }
    }
    return p;
  }
};

Source source_from_json(const json& j, const std::string& where, int n, double lambda) {
  Source s;
  if (j.is_object()) {
    reject_unknown(j, {"family"}, where);
    const auto fam = family_from_json(j.at("family"));
    if (fam.n != n) throw SpecError(where + ": family dimension differs from n");
    if (fam.lambda != lambda) throw SpecError(where + ": family lambda differs from lambda");
    s.fam = fam.fs;
  } else {
    s.e = expression(j, "tau", where);
  }
  return s;
}

}  // namespace

frame::FrameStructure load_frame_spec(const std::string& text) {
  const json j = parse_text(text);
  reject_unknown(j, {"name", "n", "lambda", "family", "coefficients", "potential", "perturb"},
                 "frame spec");
  auto spec = std::make_shared<Spec>();
  spec->name = j.value("name", std::string("json"));
  if (j.contains("family")) {
    const auto fam = family_from_json(j.at("family"));
    spec->base = fam.fs;
    spec->n = fam.n;
    spec->lambda = fam.lambda;
  }
  if (j.contains("n")) {
    const double nd = number(j, "n", "frame spec");
    if (nd != static_cast<int>(nd) || nd < 1) throw SpecError("frame spec: 'n' must be an integer >= 1");
    if (spec->base && spec->n != nd) throw SpecError("frame spec: 'n' differs from the family");
    spec->n = static_cast<int>(nd);
  }
  if (j.contains("lambda")) {
    const double lam = number(j, "lambda", "frame spec");
    if (spec->base && spec->lambda != lam) throw SpecError("frame spec: 'lambda' differs from the family");
    spec->lambda = lam;
  }
  if (spec->n < 1) throw SpecError("frame spec: need 'n' or a 'family'");
  if (!spec->base && !j.contains("lambda")) throw SpecError("frame spec: need 'lambda' or a 'family'");
  const int n = spec->n;

  if (j.contains("coefficients")) {
    const json& c = j.at("coefficients");
    if (!c.is_object()) throw SpecError("coefficients: expected an object");
    for (auto it = c.begin(); it != c.end(); ++it) {
      const std::string key = it.key();
      const std::string where = "coefficients." + key;
      if (key == "L") {
        spec->L = source_from_json(it.value(), where, n, spec->lambda);
        continue;
      }
      if (key.size() != 1 || std::string("ABCDEFGHN").find(key[0]) == std::string::npos) {
        throw SpecError("coefficients: unknown coefficient '" + key + "'");
      }
      std::vector<Source> v;
      if (it.value().is_array()) {
        if (static_cast<int>(it.value().size()) != n) {
          throw SpecError(where + ": expected " + std::to_string(n) + " entries");
        }
        for (int i = 0; i < n; ++i) {
          v.push_back(source_from_json(it.value()[i], where + "[" + std::to_string(i) + "]", n,
                                       spec->lambda));
        }
      } else {
        v.assign(n, source_from_json(it.value(), where, n, spec->lambda));
      }
      spec->indexed[key[0]] = std::move(v);
    }
  }
  if (j.contains("potential")) {
    const json& p = j.at("potential");
    reject_unknown(p, {"first", "second"}, "potential");
    if (!p.contains("first")) throw SpecError("potential: missing 'first'");
    spec->f_first = expression(p.at("first"), "tau", "potential.first");
    if (p.contains("second")) spec->f_second = expression(p.at("second"), "tau", "potential.second");
  }
  if (j.contains("perturb")) {
    const json& list = j.at("perturb");
    if (!list.is_array()) throw SpecError("perturb: expected an array");
    for (const auto& d : list) {
      reject_unknown(d, {"coefficient", "index", "value", "derivative"}, "perturb");
      if (!d.contains("coefficient") || !d.at("coefficient").is_string()) {
        throw SpecError("perturb: missing 'coefficient'");
      }
      const std::string name = d.at("coefficient").get<std::string>();
      Perturbation pt{};
      if (name == "L") {
        pt.name = 'L';
      } else if (name.size() == 1 && std::string("ABCDEFGHN").find(name[0]) != std::string::npos) {
        pt.name = name[0];
        const double idx = number_or(d, "index", 1, "perturb");
        if (idx != static_cast<int>(idx) || idx < 1 || idx > n) {
          throw SpecError("perturb: 'index' must be in [1, n]");
        }
        pt.index = static_cast<int>(idx) - 1;
      } else {
        throw SpecError("perturb: unknown coefficient '" + name + "'");
      }
      pt.value = number_or(d, "value", 0.0, "perturb");
      pt.derivative = number_or(d, "derivative", 0.0, "perturb");
      spec->perturb.push_back(pt);
    }
  }
  return frame::FrameStructure(
      n, spec->lambda, [spec](double tau) { return spec->at(tau); }, spec->name);
}

frame::FrameStructure load_frame_spec_file(const std::string& path) {
  return load_frame_spec(read_file(path));
}

e2::EpsilonProfile load_epsilon_profile(const std::string& text) {
  return epsilon_from_json(parse_text(text));
}

e2::EpsilonProfile load_epsilon_profile_file(const std::string& path) {
  return load_epsilon_profile(read_file(path));
}

e2::EpsilonProfile epsilon_from_argument(const std::string& arg) {
  if (arg == "zero") return e2::EpsilonProfile::zero();
  if (arg == "quadratic-bump") return e2::EpsilonProfile::quadratic_bump();
  return load_epsilon_profile_file(arg);
}

}  // namespace solab::spec
