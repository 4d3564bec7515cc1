#pragma once
// Small expression language for metric / 1-form component functions.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := number | 'x' index | fn '(' expr ')' | '(' expr ')' | '-' factor
//
// Coordinates are written 1-based ("x1") and stored 0-based. Number
// literals (decimal or integer) are kept as exact rationals; a quotient of
// two literals is folded into one exact rational constant so catalog
// formulas like 1/4 survive printing and re-parsing unchanged.

#include <cctype>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t at)
      : std::runtime_error(msg + " (byte " + std::to_string(at) + ")"), offset(at) {}
  std::size_t offset;
};

struct FieldExpr;
using ExprPtr = std::shared_ptr<const FieldExpr>;

enum class ExprFn { sin, cos, exp, log, sqrt, neg };

struct FieldExpr {
  enum class Kind { constant, coordinate, add, sub, mul, div, pow, call };
  Kind kind;
  long long num = 0, den = 1;  // constant: exact rational num/den, den > 0
  int index = 0;               // coordinate (0-based)
  int exponent = 1;            // pow
  ExprFn fn = ExprFn::neg;     // call
  ExprPtr a, b;

  static ExprPtr constant(long long n, long long d = 1) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) { n = -n; d = -d; }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    auto e = std::make_shared<FieldExpr>();
    e->kind = Kind::constant;
    e->num = g ? n / g : 0;
    e->den = g ? d / g : 1;
    return e;
  }
  static ExprPtr coordinate(int i) {
    auto e = std::make_shared<FieldExpr>();
    e->kind = Kind::coordinate;
    e->index = i;
    return e;
  }
  static ExprPtr binary(Kind k, ExprPtr lhs, ExprPtr rhs) {
    if (k == Kind::div && lhs->kind == Kind::constant && rhs->kind == Kind::constant &&
        rhs->num != 0)
      return constant(lhs->num * rhs->den, lhs->den * rhs->num);
    auto e = std::make_shared<FieldExpr>();
    e->kind = k;
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
  }
  static ExprPtr power(ExprPtr base, int k) {
    auto e = std::make_shared<FieldExpr>();
    e->kind = Kind::pow;
    e->a = std::move(base);
    e->exponent = k;
    return e;
  }
  static ExprPtr call(ExprFn f, ExprPtr arg) {
    auto e = std::make_shared<FieldExpr>();
    e->kind = Kind::call;
    e->fn = f;
    e->a = std::move(arg);
    return e;
  }
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

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
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = FieldExpr::binary(FieldExpr::Kind::add, e, term());
      else if (eat('-'))
        e = FieldExpr::binary(FieldExpr::Kind::sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*'))
        e = FieldExpr::binary(FieldExpr::Kind::mul, e, factor());
      else if (eat('/'))
        e = FieldExpr::binary(FieldExpr::Kind::div, e, factor());
      else
        return e;
    }
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (eat('^')) return FieldExpr::power(base, integer());
    return base;
  }

  int integer() {
    skip_ws();
    const std::size_t at = pos_;
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) negative = (s_[pos_++] == '-');
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected integer exponent", at);
    long long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * 10 + (s_[pos_++] - '0');
    if (v > 64) throw ParseError("exponent too large", at);
    return static_cast<int>(negative ? -v : v);
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == '-') {
      ++pos_;
      return FieldExpr::call(ExprFn::neg, factor());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t at = pos_;
    long long intpart = 0, fracnum = 0, fracden = 1;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      intpart = intpart * 10 + (s_[pos_++] - '0');
      any = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        if (fracden > (1LL << 55)) throw ParseError("literal has too many digits", at);
        fracnum = fracnum * 10 + (s_[pos_++] - '0');
        fracden *= 10;
        any = true;
      }
    }
    if (!any) throw ParseError("malformed number", at);
    return FieldExpr::constant(intpart * fracden + fracnum, fracden);
  }

  ExprPtr identifier() {
    const std::size_t at = pos_;
    std::string name;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
      name += s_[pos_++];
    if (name.size() >= 2 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      int idx = 0;
      for (std::size_t k = 1; k < name.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(name[k])))
          throw ParseError("malformed coordinate name", at);
        idx = idx * 10 + (name[k] - '0');
      }
      if (idx < 1 || idx > n_) throw ParseError("coordinate index out of range", at);
      return FieldExpr::coordinate(idx - 1);
    }
    ExprFn fn;
    if (name == "sin") fn = ExprFn::sin;
    else if (name == "cos") fn = ExprFn::cos;
    else if (name == "exp") fn = ExprFn::exp;
    else if (name == "log") fn = ExprFn::log;
    else if (name == "sqrt") fn = ExprFn::sqrt;
    else if (name == "neg") fn = ExprFn::neg;
    else throw ParseError("unknown identifier '" + name + "'", at);
    if (!eat('(')) fail("expected '(' after function name");
    ExprPtr arg = expr();
    if (!eat(')')) fail("expected ')'");
    return FieldExpr::call(fn, arg);
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse_expr(std::string_view text, int n) {
  return detail::Parser(text, n).run();
}

inline const char* fn_name(ExprFn f) {
  switch (f) {
    case ExprFn::sin: return "sin";
    case ExprFn::cos: return "cos";
    case ExprFn::exp: return "exp";
    case ExprFn::log: return "log";
    case ExprFn::sqrt: return "sqrt";
    case ExprFn::neg: return "neg";
  }
  return "?";
}

// Canonical rendering; parse(print(parse(t))) reproduces parse(t).
inline std::string print_expr(const ExprPtr& e) {
  using K = FieldExpr::Kind;
  auto wrap = [](const std::string& s) { return "(" + s + ")"; };
  auto needs_parens_in_product = [](const ExprPtr& c) {
    return c->kind == K::add || c->kind == K::sub;
  };
  switch (e->kind) {
    case K::constant:
      return e->den == 1 ? std::to_string(e->num)
                         : std::to_string(e->num) + "/" + std::to_string(e->den);
    case K::coordinate:
      return "x" + std::to_string(e->index + 1);
    case K::add:
      return print_expr(e->a) + " + " + print_expr(e->b);
    case K::sub: {
      std::string rhs = print_expr(e->b);
      if (e->b->kind == K::add || e->b->kind == K::sub) rhs = wrap(rhs);
      return print_expr(e->a) + " - " + rhs;
    }
    case K::mul: {
      std::string lhs = print_expr(e->a), rhs = print_expr(e->b);
      if (needs_parens_in_product(e->a)) lhs = wrap(lhs);
      if (needs_parens_in_product(e->b) || e->b->kind == K::div) rhs = wrap(rhs);
      return lhs + "*" + rhs;
    }
    case K::div: {
      std::string lhs = print_expr(e->a), rhs = print_expr(e->b);
      if (needs_parens_in_product(e->a)) lhs = wrap(lhs);
      if (e->b->kind != K::coordinate && e->b->kind != K::call &&
          !(e->b->kind == K::constant && e->b->den == 1 && e->b->num >= 0))
        rhs = wrap(rhs);
      return lhs + "/" + rhs;
    }
    case K::pow: {
      std::string base = print_expr(e->a);
      if (e->a->kind != K::coordinate && e->a->kind != K::call) base = wrap(base);
      return base + "^" + std::to_string(e->exponent);
    }
    case K::call:
      return std::string(fn_name(e->fn)) + "(" + print_expr(e->a) + ")";
  }
  return "?";
}

inline bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
  if (x->kind != y->kind) return false;
  using K = FieldExpr::Kind;
  switch (x->kind) {
    case K::constant: return x->num == y->num && x->den == y->den;
    case K::coordinate: return x->index == y->index;
    case K::pow: return x->exponent == y->exponent && expr_equal(x->a, y->a);
    case K::call: return x->fn == y->fn && expr_equal(x->a, y->a);
    default: return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
  }
}

namespace detail {
inline double make_like(double v, const double&) { return v; }
inline Jet make_like(double v, const Jet& like) { return Jet::constant(v, like.n(), like.K()); }
inline double ipow(double x, int e) {
  if (e < 0) return 1.0 / ipow(x, -e);
  double acc = 1.0;
  while (e-- > 0) acc *= x;
  return acc;
}
inline Jet ipow(const Jet& x, int e) { return x.pow_int(e); }
}  // namespace detail

// Evaluate over T = double or T = Jet; `vars` supplies one T per coordinate.
template <class T>
T eval_expr(const ExprPtr& e, const std::vector<T>& vars) {
  using K = FieldExpr::Kind;
  switch (e->kind) {
    case K::constant:
      return detail::make_like(double(e->num) / double(e->den), vars.at(0));
    case K::coordinate:
      return vars.at(static_cast<std::size_t>(e->index));
    case K::add: return eval_expr(e->a, vars) + eval_expr(e->b, vars);
    case K::sub: return eval_expr(e->a, vars) - eval_expr(e->b, vars);
    case K::mul: return eval_expr(e->a, vars) * eval_expr(e->b, vars);
    case K::div: return eval_expr(e->a, vars) / eval_expr(e->b, vars);
    case K::pow: return detail::ipow(eval_expr(e->a, vars), e->exponent);
    case K::call: {
      T arg = eval_expr(e->a, vars);
      using std::cos;
      using std::exp;
      using std::log;
      using std::sin;
      using std::sqrt;
      switch (e->fn) {
        case ExprFn::sin: return sin(arg);
        case ExprFn::cos: return cos(arg);
        case ExprFn::exp: return exp(arg);
        case ExprFn::log: return log(arg);
        case ExprFn::sqrt: return sqrt(arg);
        case ExprFn::neg: return -arg;
      }
      break;
    }
  }
  throw std::logic_error("unhandled expression node");
}

// Jet of the expression about `point`, to order K.
inline Jet eval_field(const ExprPtr& e, const std::vector<double>& point, int K) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> vars;
  vars.reserve(point.size());
  for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(i, point[static_cast<std::size_t>(i)], n, K));
  return eval_expr(e, vars);
}

}  // namespace finsler
