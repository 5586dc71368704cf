#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace solab::expr {

// Value with first and second derivative in the expression variable.
struct Jet2 {
  double v = 0;
  double d1 = 0;
  double d2 = 0;
};

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct Node;

// Expression in one variable built from numbers, the variable, pi,
// + - * /, integer powers x^k (k may be negative) and exp, log, sqrt.
// Derivatives are propagated exactly through the syntax tree.
class Expression {
 public:
  static Expression parse(const std::string& text, const std::string& variable);

  double operator()(double x) const { return jet(x).v; }
  Jet2 jet(double x) const;
  const std::string& text() const { return text_; }
  const std::string& variable() const { return variable_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_, variable_;
};

}  // namespace solab::expr
