#include "starpoly/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace starpoly {

namespace {

const char* op_symbol(ExprKind k) {
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    case ExprKind::Pow: return "^";
    case ExprKind::Neg: return "-";
    case ExprKind::Sin: return "sin";
    case ExprKind::Cos: return "cos";
    case ExprKind::Exp: return "exp";
    case ExprKind::Sqrt: return "sqrt";
    case ExprKind::Pi: return "pi";
    case ExprKind::E: return "e";
    case ExprKind::Var: return "t";
    case ExprKind::Number: break;
  }
  return "";
}

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = Expr::binary(ExprKind::Add, e, term());
      else if (accept('-')) e = Expr::binary(ExprKind::Sub, e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = Expr::binary(ExprKind::Mul, e, unary());
      else if (accept('/')) e = Expr::binary(ExprKind::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(ExprKind::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(ExprKind::Pow, base, unary());
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      Expr e = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto r = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (r.ec != std::errc()) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(r.ptr - s_.data());
    return Expr::number(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    static constexpr std::pair<std::string_view, ExprKind> kLeaves[] = {
        {"t", ExprKind::Var}, {"pi", ExprKind::Pi}, {"e", ExprKind::E}};
    static constexpr std::pair<std::string_view, ExprKind> kFuncs[] = {
        {"sin", ExprKind::Sin}, {"cos", ExprKind::Cos}, {"exp", ExprKind::Exp}, {"sqrt", ExprKind::Sqrt}};
    for (auto [n, k] : kLeaves)
      if (name == n) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(')
          throw ParseError("'" + std::string(name) + "' takes no arguments", start);
        return Expr::leaf(k);
      }
    for (auto [n, k] : kFuncs)
      if (name == n) {
        if (!accept('(')) throw ParseError("'" + std::string(name) + "' expects one argument", start);
        std::vector<Expr> args;
        if (!accept(')')) {
          do args.push_back(expr());
          while (accept(','));
          if (!accept(')')) throw ParseError("expected ')'", pos_);
        }
        if (args.size() != 1)
          throw ParseError("'" + std::string(name) + "' expects one argument, got " + std::to_string(args.size()),
                           start);
        return Expr::unary(k, args.front());
      }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::number(double v) { return Expr(std::make_shared<Node>(Node{ExprKind::Number, v, nullptr, nullptr})); }

Expr Expr::leaf(ExprKind k) { return Expr(std::make_shared<Node>(Node{k, 0.0, nullptr, nullptr})); }

Expr Expr::unary(ExprKind k, Expr a) {
  return Expr(std::make_shared<Node>(Node{k, 0.0, std::make_shared<const Expr>(std::move(a)), nullptr}));
}

Expr Expr::binary(ExprKind k, Expr a, Expr b) {
  return Expr(std::make_shared<Node>(Node{k, 0.0, std::make_shared<const Expr>(std::move(a)),
                                          std::make_shared<const Expr>(std::move(b))}));
}

double Expr::eval(double t) const {
  switch (kind()) {
    case ExprKind::Number: return value();
    case ExprKind::Pi: return std::numbers::pi;
    case ExprKind::E: return std::numbers::e;
    case ExprKind::Var: return t;
    case ExprKind::Neg: return -lhs().eval(t);
    case ExprKind::Add: return lhs().eval(t) + rhs().eval(t);
    case ExprKind::Sub: return lhs().eval(t) - rhs().eval(t);
    case ExprKind::Mul: return lhs().eval(t) * rhs().eval(t);
    case ExprKind::Div: return lhs().eval(t) / rhs().eval(t);
    case ExprKind::Pow: return std::pow(lhs().eval(t), rhs().eval(t));
    case ExprKind::Sin: return std::sin(lhs().eval(t));
    case ExprKind::Cos: return std::cos(lhs().eval(t));
    case ExprKind::Exp: return std::exp(lhs().eval(t));
    case ExprKind::Sqrt: return std::sqrt(lhs().eval(t));
  }
  return 0.0;
}

std::string Expr::str() const {
  switch (kind()) {
    case ExprKind::Number: return format_number(value());
    case ExprKind::Pi:
    case ExprKind::E:
    case ExprKind::Var: return op_symbol(kind());
    case ExprKind::Neg: return "(-" + lhs().str() + ")";
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow: return "(" + lhs().str() + " " + op_symbol(kind()) + " " + rhs().str() + ")";
    default: return std::string(op_symbol(kind())) + "(" + lhs().str() + ")";
  }
}

std::string Expr::sexpr() const {
  switch (kind()) {
    case ExprKind::Number: return format_number(value());
    case ExprKind::Pi:
    case ExprKind::E:
    case ExprKind::Var: return op_symbol(kind());
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow:
      return std::string("(") + op_symbol(kind()) + " " + lhs().sexpr() + " " + rhs().sexpr() + ")";
    default: return std::string("(") + op_symbol(kind()) + " " + lhs().sexpr() + ")";
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == ExprKind::Number) return a.value() == b.value();
  if (a.node_->lhs && !(a.lhs() == b.lhs())) return false;
  if (a.node_->rhs && !(a.rhs() == b.rhs())) return false;
  return true;
}

Expr parse_expression(std::string_view src) { return Parser(src).parse(); }

}  // namespace starpoly
