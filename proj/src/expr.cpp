#include "phh/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>

namespace phh {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

ExpressionDomainError::ExpressionDomainError(const std::string& reason, std::string subexpression)
    : DomainError(reason + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

namespace ast {

bool equal(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return a == b;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::kNumber:
      return a->number == b->number;
    case Op::kImagUnit:
      return true;
    case Op::kVar:
      return a->var == b->var;
    case Op::kNeg:
      return equal(a->lhs, b->lhs);
    case Op::kPow:
      return a->exponent == b->exponent && equal(a->lhs, b->lhs);
    case Op::kCall:
      return a->func == b->func && equal(a->lhs, b->lhs);
    default:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

}  // namespace ast

namespace {

using ast::Func;
using ast::Node;
using ast::NodePtr;
using ast::Op;

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }
NodePtr number(double v) {
  Node n;
  n.op = Op::kNumber;
  n.number = v;
  return make(n);
}
NodePtr variable(int i) {
  Node n;
  n.op = Op::kVar;
  n.var = i;
  return make(n);
}
NodePtr imag_unit() {
  Node n;
  n.op = Op::kImagUnit;
  return make(n);
}
NodePtr binary(Op op, NodePtr a, NodePtr b) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(n);
}
NodePtr unary(Op op, NodePtr a) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  return make(n);
}

const std::array<std::pair<const char*, Func>, 7> kFunctions{{{"sin", Func::kSin},
                                                              {"cos", Func::kCos},
                                                              {"exp", Func::kExp},
                                                              {"ln", Func::kLn},
                                                              {"sqrt", Func::kSqrt},
                                                              {"re", Func::kRe},
                                                              {"im", Func::kIm}}};

const char* func_name(Func f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

// Value of a variable-free subtree, used to fold exponents.
std::optional<double> fold_constant(const NodePtr& n) {
  switch (n->op) {
    case Op::kNumber:
      return n->number;
    case Op::kNeg: {
      auto a = fold_constant(n->lhs);
      if (a) return -*a;
      return std::nullopt;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv: {
      auto a = fold_constant(n->lhs), b = fold_constant(n->rhs);
      if (!a || !b) return std::nullopt;
      if (n->op == Op::kAdd) return *a + *b;
      if (n->op == Op::kSub) return *a - *b;
      if (n->op == Op::kMul) return *a * *b;
      return *a / *b;
    }
    case Op::kPow: {
      auto a = fold_constant(n->lhs);
      if (a) return std::pow(*a, n->exponent);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

class Parser {
 public:
  Parser(std::string_view text, Chart chart) : s_(text), chart_(chart) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(ParseError::Kind::kSyntax, pos_, "unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t at, const std::string& msg) {
    throw ParseError(kind, at, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr a = term();
    for (;;) {
      if (eat('+'))
        a = binary(Op::kAdd, a, term());
      else if (eat('-'))
        a = binary(Op::kSub, a, term());
      else
        return a;
    }
  }

  NodePtr term() {
    NodePtr a = unary_expr();
    for (;;) {
      if (eat('*'))
        a = binary(Op::kMul, a, unary_expr());
      else if (eat('/'))
        a = binary(Op::kDiv, a, unary_expr());
      else
        return a;
    }
  }

  NodePtr unary_expr() {
    if (eat('-')) return unary(Op::kNeg, unary_expr());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip_ws();
    const std::size_t at = pos_;
    if (!eat('^')) return base;
    NodePtr ex = unary_expr();
    auto v = fold_constant(ex);
    if (!v || !std::isfinite(*v) || std::round(*v) != *v || std::abs(*v) > 1024)
      fail(ParseError::Kind::kSyntax, at, "exponent of '^' must be an integer constant");
    Node n;
    n.op = Op::kPow;
    n.lhs = base;
    n.exponent = static_cast<int>(*v);
    return make(n);
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail(ParseError::Kind::kSyntax, pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      NodePtr e;
      try {
        e = expr();
      } catch (const ParseError& err) {
        if (err.kind() == ParseError::Kind::kSyntax && err.offset() >= s_.size())
          fail(ParseError::Kind::kSyntax, open, "unbalanced '('");
        throw;
      }
      if (!eat(')')) fail(ParseError::Kind::kSyntax, pos_ >= s_.size() ? open : pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(ParseError::Kind::kSyntax, pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number_literal() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) fail(ParseError::Kind::kSyntax, start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    return number(std::stod(std::string(s_.substr(start, pos_ - start))));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));

    for (const auto& [fname, fn] : kFunctions) {
      if (name != fname) continue;
      if (!eat('(')) fail(ParseError::Kind::kArity, start, "function '" + name + "' expects one argument");
      NodePtr arg;
      if (eat(')')) fail(ParseError::Kind::kArity, start, "function '" + name + "' expects one argument");
      arg = expr();
      if (eat(',')) fail(ParseError::Kind::kArity, start, "function '" + name + "' expects one argument");
      if (!eat(')')) fail(ParseError::Kind::kSyntax, pos_ >= s_.size() ? start : pos_, "expected ')'");
      Node n;
      n.op = Op::kCall;
      n.func = fn;
      n.lhs = arg;
      return make(n);
    }

    const auto& vars = Expression::variable_names(chart_);
    for (int i = 0; i < 4; ++i)
      if (name == vars[i]) return variable(i);
    if (name == "pi") return number(M_PI);
    if (chart_ == Chart::kComplex) {
      if (name == "i") return imag_unit();
      if (name == "z1") return binary(Op::kAdd, variable(0), binary(Op::kMul, imag_unit(), variable(1)));
      if (name == "z2") return binary(Op::kAdd, variable(2), binary(Op::kMul, imag_unit(), variable(3)));
    }
    fail(ParseError::Kind::kUnknownIdentifier, start, "unknown identifier '" + name + "'");
  }

  std::string_view s_;
  Chart chart_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep the printed literal a valid literal for the parser.
  if (s == "inf" || s == "nan" || s == "-inf") throw std::invalid_argument("non-finite literal");
  return s;
}

std::string print_node(const NodePtr& n, Chart chart) {
  switch (n->op) {
    case Op::kNumber:
      return format_number(n->number);
    case Op::kImagUnit:
      return "i";
    case Op::kVar:
      return Expression::variable_names(chart)[n->var];
    case Op::kNeg:
      return "(-" + print_node(n->lhs, chart) + ")";
    case Op::kAdd:
      return "(" + print_node(n->lhs, chart) + " + " + print_node(n->rhs, chart) + ")";
    case Op::kSub:
      return "(" + print_node(n->lhs, chart) + " - " + print_node(n->rhs, chart) + ")";
    case Op::kMul:
      return "(" + print_node(n->lhs, chart) + " * " + print_node(n->rhs, chart) + ")";
    case Op::kDiv:
      return "(" + print_node(n->lhs, chart) + " / " + print_node(n->rhs, chart) + ")";
    case Op::kPow:
      return "(" + print_node(n->lhs, chart) + "^" + std::to_string(n->exponent) + ")";
    case Op::kCall:
      return std::string(func_name(n->func)) + "(" + print_node(n->lhs, chart) + ")";
  }
  return {};
}

Jet eval_node(const NodePtr& n, const std::array<Jet, 4>& args, Chart chart) {
  auto guarded = [&](auto&& f) -> Jet {
    try {
      return f();
    } catch (const ExpressionDomainError&) {
      throw;
    } catch (const DomainError& e) {
      throw ExpressionDomainError(e.what(), print_node(n, chart));
    }
  };
  switch (n->op) {
    case Op::kNumber:
      return Jet(n->number);
    case Op::kImagUnit:
      return Jet(Complex(0.0, 1.0));
    case Op::kVar:
      return args[n->var];
    case Op::kNeg:
      return -eval_node(n->lhs, args, chart);
    case Op::kAdd:
      return eval_node(n->lhs, args, chart) + eval_node(n->rhs, args, chart);
    case Op::kSub:
      return eval_node(n->lhs, args, chart) - eval_node(n->rhs, args, chart);
    case Op::kMul:
      return eval_node(n->lhs, args, chart) * eval_node(n->rhs, args, chart);
    case Op::kDiv: {
      Jet a = eval_node(n->lhs, args, chart);
      Jet b = eval_node(n->rhs, args, chart);
      return guarded([&] { return a / b; });
    }
    case Op::kPow: {
      Jet a = eval_node(n->lhs, args, chart);
      return guarded([&] { return pow(a, n->exponent); });
    }
    case Op::kCall: {
      Jet a = eval_node(n->lhs, args, chart);
      switch (n->func) {
        case Func::kSin:
          return sin(a);
        case Func::kCos:
          return cos(a);
        case Func::kExp:
          return exp(a);
        case Func::kLn:
          return guarded([&] { return log(a); });
        case Func::kSqrt:
          return guarded([&] { return sqrt(a); });
        case Func::kRe:
          return a.real();
        case Func::kIm:
          return a.imag();
      }
    }
  }
  return Jet();
}

bool node_depends_on(const NodePtr& n, int var) {
  if (!n) return false;
  if (n->op == Op::kVar) return n->var == var;
  return node_depends_on(n->lhs, var) || node_depends_on(n->rhs, var);
}

}  // namespace

Expression::Expression() : root_(number(0.0)) {}

Expression Expression::parse(std::string_view text, Chart chart) {
  return Expression(Parser(text, chart).parse(), chart);
}

Expression Expression::constant(double v, Chart chart) { return Expression(number(v), chart); }

const std::array<std::string, 4>& Expression::variable_names(Chart chart) {
  static const std::array<std::string, 4> real{"x", "y", "z", "t"};
  static const std::array<std::string, 4> cplx{"x1", "y1", "x2", "y2"};
  return chart == Chart::kReal ? real : cplx;
}

Jet Expression::evaluate(const std::array<Jet, 4>& args) const { return eval_node(root_, args, chart_); }

Complex Expression::evaluate(const Vec4& p) const {
  return evaluate(std::array<Jet, 4>{Jet(p(0)), Jet(p(1)), Jet(p(2)), Jet(p(3))}).value();
}

std::string Expression::print() const { return print_node(root_, chart_); }

bool Expression::depends_on(int var) const { return node_depends_on(root_, var); }

bool Expression::is_constant() const {
  for (int i = 0; i < 4; ++i)
    if (depends_on(i)) return false;
  return true;
}

Jet2 eval_jet2(const Expression& e, const Vec4& p) {
  std::array<Jet, 4> args;
  for (int i = 0; i < 4; ++i) args[i] = Jet::variable(i, p(i), 2);
  const Jet f = e.evaluate(args);
  Jet2 out;
  out.value = f.value().real();
  for (int i = 0; i < 4; ++i) {
    out.gradient(i) = f.partial(i).real();
    for (int j = i; j < 4; ++j) out.hessian(i, j) = out.hessian(j, i) = f.partial(i, j).real();
  }
  return out;
}

}  // namespace phh
