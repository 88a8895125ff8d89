#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace papdyn {

/// Parsed expression of one real variable `t`.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | primary
///   primary := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | exp | abs | sqrt
///
/// An `Expr` is immutable and cheap to copy (shared tree). It keeps its
/// source text so configs can be written back verbatim.
class Expr {
 public:
  enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Sin, Cos, Exp, Abs, Sqrt };

  struct Node {
    Op op;
    double value = 0.0;  // Number only
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr() = default;

  static Expr parse(std::string_view text);
  static Expr constant(double value);

  double eval(double t) const;
  bool is_constant() const;

  const std::string& text() const { return text_; }
  const Node* root() const { return root_.get(); }
  bool empty() const { return root_ == nullptr; }

  friend bool operator==(const Expr& a, const Expr& b) { return a.text_ == b.text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

double eval_node(const Expr::Node& node, double t);

std::string format_real(double value);

}  // namespace papdyn
