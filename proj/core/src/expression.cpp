#include "solab/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace solab::expr {

struct Node {
  virtual ~Node() = default;
  virtual Jet2 eval(double x) const = 0;
};

namespace {

using Ptr = std::shared_ptr<const Node>;

struct Constant final : Node {
  double c;
  explicit Constant(double v) : c(v) {}
  Jet2 eval(double) const override { return {c, 0, 0}; }
};

struct Variable final : Node {
  Jet2 eval(double x) const override { return {x, 1, 0}; }
};

struct Negate final : Node {
  Ptr a;
  explicit Negate(Ptr p) : a(std::move(p)) {}
  Jet2 eval(double x) const override {
    const Jet2 u = a->eval(x);
    return {-u.v, -u.d1, -u.d2};
  }
};

struct Binary final : Node {
  char op;
  Ptr a, b;
  Binary(char o, Ptr l, Ptr r) : op(o), a(std::move(l)), b(std::move(r)) {}
  Jet2 eval(double x) const override {
    const Jet2 u = a->eval(x), w = b->eval(x);
    switch (op) {
      case '+': return {u.v + w.v, u.d1 + w.d1, u.d2 + w.d2};
      case '-': return {u.v - w.v, u.d1 - w.d1, u.d2 - w.d2};
      case '*':
        return {u.v * w.v, u.d1 * w.v + u.v * w.d1,
                u.d2 * w.v + 2 * u.d1 * w.d1 + u.v * w.d2};
      default: {
        const double q = u.v / w.v;
        const double q1 = (u.d1 - q * w.d1) / w.v;
        const double q2 = (u.d2 - 2 * q1 * w.d1 - q * w.d2) / w.v;
        return {q, q1, q2};
      }
    }
  }
};

struct IntPower final : Node {
  Ptr a;
  int k;
  IntPower(Ptr p, int e) : a(std::move(p)), k(e) {}
  Jet2 eval(double x) const override {
    const Jet2 u = a->eval(x);
    if (k == 0) return {1, 0, 0};
    const double pm2 = k == 1 ? 0.0 : std::pow(u.v, k - 2);
    const double pm1 = k == 1 ? 1.0 : pm2 * u.v;
    return {pm1 * u.v, k * pm1 * u.d1, k * (k - 1) * pm2 * u.d1 * u.d1 + k * pm1 * u.d2};
  }
};

enum class Fn { exp, log, sqrt };

struct Function final : Node {
  Fn fn;
  Ptr a;
  Function(Fn f, Ptr p) : fn(f), a(std::move(p)) {}
  Jet2 eval(double x) const override {
    const Jet2 u = a->eval(x);
    double g = 0, g1 = 0, g2 = 0;
    switch (fn) {
      case Fn::exp: g = g1 = g2 = std::exp(u.v); break;
      case Fn::log: g = std::log(u.v); g1 = 1 / u.v; g2 = -g1 * g1; break;
      case Fn::sqrt: g = std::sqrt(u.v); g1 = 0.5 / g; g2 = -0.5 * g1 / u.v; break;
    }
    return {g, g1 * u.d1, g2 * u.d1 * u.d1 + g1 * u.d2};
  }
};

class Parser {
 public:
  Parser(const std::string& s, const std::string& var) : s_(s), var_(var) {}

  Ptr parse() {
    Ptr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Ptr sum() {
    Ptr e = product();
    for (;;) {
      if (eat('+')) e = std::make_shared<Binary>('+', e, product());
      else if (eat('-')) e = std::make_shared<Binary>('-', e, product());
      else return e;
    }
  }

  Ptr product() {
    Ptr e = unary();
    for (;;) {
      if (eat('*')) e = std::make_shared<Binary>('*', e, unary());
      else if (eat('/')) e = std::make_shared<Binary>('/', e, unary());
      else return e;
    }
  }

  Ptr unary() {
    if (eat('-')) return std::make_shared<Negate>(unary());
    if (eat('+')) return unary();
    return power();
  }

  Ptr power() {
    Ptr base = primary();
    if (!eat('^')) return base;
    const bool paren = eat('(');
    bool neg = eat('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("exponent must be an integer literal");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      pos_ = start;
      fail("exponent must be an integer literal");
    }
    const int k = std::atoi(s_.substr(start, pos_ - start).c_str());
    if (paren && !eat(')')) fail("expected ')'");
    return std::make_shared<IntPower>(base, neg ? -k : k);
  }

  Ptr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Ptr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return std::make_shared<Constant>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string id = s_.substr(start, pos_ - start);
      if (id == var_) return std::make_shared<Variable>();
      if (id == "pi") return std::make_shared<Constant>(std::numbers::pi);
      Fn fn;
      if (id == "exp") fn = Fn::exp;
      else if (id == "log") fn = Fn::log;
      else if (id == "sqrt") fn = Fn::sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + id + "'");
      }
      if (!eat('(')) fail("expected '(' after " + id);
      Ptr arg = sum();
      if (!eat(')')) fail("expected ')'");
      return std::make_shared<Function>(fn, arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, const std::string& variable) {
  Expression e;
  e.root_ = Parser(text, variable).parse();
  e.text_ = text;
  e.variable_ = variable;
  return e;
}

Jet2 Expression::jet(double x) const {
  if (!root_) throw std::logic_error("expression: empty");
  return root_->eval(x);
}

}  // namespace solab::expr
