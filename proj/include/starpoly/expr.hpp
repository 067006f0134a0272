#pragma once

// Scalar expressions in t for time-dependent matrix entries.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?
//   primary:= number | 'pi' | 'e' | 't' | fn '(' expr ')' | '(' expr ')'
//   fn     := sin | cos | exp | sqrt

#include <memory>
#include <string>
#include <string_view>

#include "starpoly/error.hpp"

namespace starpoly {

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ConfigError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class ExprKind { Number, Pi, E, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt };

class Expr {
 public:
  static Expr number(double v);
  static Expr leaf(ExprKind k);
  static Expr unary(ExprKind k, Expr a);
  static Expr binary(ExprKind k, Expr a, Expr b);

  ExprKind kind() const noexcept { return node_->kind; }
  double value() const noexcept { return node_->value; }
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }

  double eval(double t) const;
  // Fully parenthesized infix; parses back to an equal tree.
  std::string str() const;
  // Prefix form, e.g. (+ 1 (* t 2)).
  std::string sexpr() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    ExprKind kind;
    double value = 0.0;
    std::shared_ptr<const Expr> lhs, rhs;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr parse_expression(std::string_view src);

}  // namespace starpoly
