#include "papdyn/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "papdyn/error.hpp"

namespace papdyn {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Number;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + what + " at column " +
                      std::to_string(pos_ + 1));
  }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Expr::Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make(Expr::Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Expr::Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make(Expr::Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Expr::Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (at_end()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "t") return make(Expr::Op::Var);
      if (name == "pi") return make_number(std::numbers::pi);
      Expr::Op op;
      if (name == "sin") {
        op = Expr::Op::Sin;
      } else if (name == "cos") {
        op = Expr::Op::Cos;
      } else if (name == "exp") {
        op = Expr::Op::Exp;
      } else if (name == "abs") {
        op = Expr::Op::Abs;
      } else if (name == "sqrt") {
        op = Expr::Op::Sqrt;
      } else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return make(op, arg);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return make_number(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool node_is_constant(const Expr::Node& n) {
  switch (n.op) {
    case Expr::Op::Number:
      return true;
    case Expr::Op::Var:
      return false;
    default:
      return node_is_constant(*n.lhs) && (!n.rhs || node_is_constant(*n.rhs));
  }
}

}  // namespace

double eval_node(const Expr::Node& n, double t) {
  switch (n.op) {
    case Expr::Op::Number:
      return n.value;
    case Expr::Op::Var:
      return t;
    case Expr::Op::Neg:
      return -eval_node(*n.lhs, t);
    case Expr::Op::Add:
      return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Expr::Op::Sub:
      return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Expr::Op::Mul:
      return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Expr::Op::Div:
      return eval_node(*n.lhs, t) / eval_node(*n.rhs, t);
    case Expr::Op::Sin:
      return std::sin(eval_node(*n.lhs, t));
    case Expr::Op::Cos:
      return std::cos(eval_node(*n.lhs, t));
    case Expr::Op::Exp:
      return std::exp(eval_node(*n.lhs, t));
    case Expr::Op::Abs:
      return std::abs(eval_node(*n.lhs, t));
    case Expr::Op::Sqrt:
      return std::sqrt(eval_node(*n.lhs, t));
  }
  return 0.0;
}

Expr Expr::parse(std::string_view text) {
  Expr e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

Expr Expr::constant(double value) {
  Expr e;
  e.root_ = make_number(value);
  e.text_ = format_real(value);
  return e;
}

double Expr::eval(double t) const {
  if (!root_) return 0.0;
  return eval_node(*root_, t);
}

bool Expr::is_constant() const { return !root_ || node_is_constant(*root_); }

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace papdyn
