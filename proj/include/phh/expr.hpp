#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "phh/jet.hpp"

namespace phh {

/// Coordinate names available to an expression. Real charts use (x, y, z, t);
/// complex charts use (x1, y1, x2, y2) and additionally accept z1 = x1 + i y1,
/// z2 = x2 + i y2 and the imaginary unit i, which are lowered at parse time.
enum class Chart { kReal, kComplex };

class ParseError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kUnknownIdentifier, kArity };
  ParseError(Kind kind, std::size_t offset, const std::string& message);
  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// A DomainError raised while evaluating a specific sub-expression.
class ExpressionDomainError : public DomainError {
 public:
  ExpressionDomainError(const std::string& reason, std::string subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

namespace ast {

enum class Op { kNumber, kImagUnit, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall };
enum class Func { kSin, kCos, kExp, kLn, kSqrt, kRe, kIm };

struct Node {
  Op op = Op::kNumber;
  double number = 0.0;  // kNumber
  int var = 0;          // kVar
  int exponent = 0;     // kPow
  Func func = Func::kSin;
  std::shared_ptr<const Node> lhs, rhs;
};

using NodePtr = std::shared_ptr<const Node>;

bool equal(const NodePtr& a, const NodePtr& b);

}  // namespace ast

/// Value, gradient and Hessian of a real scalar field at a point.
struct Jet2 {
  double value = 0.0;
  Vec4 gradient = Vec4::Zero();
  Mat4 hessian = Mat4::Zero();
};

/// Immutable parsed scalar field over chart coordinates.
class Expression {
 public:
  Expression();  // the constant 0 on a real chart

  /// Grammar (whitespace-insensitive):
  ///   expr  := term (('+' | '-') term)*
  ///   term  := unary (('*' | '/') unary)*
  ///   unary := '-' unary | power
  ///   power := primary ('^' unary)?        integer-valued constant exponent
  ///   primary := number | name | name '(' expr ')' | '(' expr ')'
  static Expression parse(std::string_view text, Chart chart = Chart::kReal);
  static Expression constant(double v, Chart chart = Chart::kReal);

  Jet evaluate(const std::array<Jet, 4>& args) const;
  Complex evaluate(const Vec4& p) const;

  /// Canonical fully parenthesised form; parse(print()) reproduces the tree.
  std::string print() const;
  bool depends_on(int var) const;
  bool is_constant() const;

  Chart chart() const { return chart_; }
  const ast::NodePtr& root() const { return root_; }
  static const std::array<std::string, 4>& variable_names(Chart chart);

 private:
  Expression(ast::NodePtr root, Chart chart) : root_(std::move(root)), chart_(chart) {}
  ast::NodePtr root_;
  Chart chart_ = Chart::kReal;
};

/// Exact value, gradient and Hessian by forward-mode Taylor arithmetic.
Jet2 eval_jet2(const Expression& e, const Vec4& p);

}  // namespace phh
