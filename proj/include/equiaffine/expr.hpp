#ifndef EQUIAFFINE_EXPR_HPP
#define EQUIAFFINE_EXPR_HPP

// Closed-form scalar expressions over chart coordinates.
//
// Grammar (left-associative, tightest binding last):
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)*
//   exponent := '-'? primary            (must not depend on coordinates)
//   primary  := number | name | func '(' expr ')' | '(' expr ')'
//   func     := sin | cos | tan | exp | ln | sqrt | sinh | cosh
//
// Expressions are immutable trees of shared nodes; copying an Expression is
// cheap and every operation on it is thread-safe.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "equiaffine/errors.hpp"
#include "equiaffine/jet.hpp"

namespace equiaffine {

enum class Op : std::uint8_t {
  Const,
  Var,
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Ln,
  Sqrt,
  Sinh,
  Cosh,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // lhs ^ value, with a constant exponent
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;  // Const: the constant; Pow: the exponent
  int index = -1;      // Var: coordinate index
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

namespace detail {

struct FunctionName {
  std::string_view name;
  Op op;
};

inline constexpr FunctionName kFunctions[] = {
    {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},
    {"ln", Op::Ln},     {"sqrt", Op::Sqrt}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh},
};

inline std::optional<Op> function_from_name(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return f.op;
  return std::nullopt;
}

inline std::string_view function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "?";
}

inline bool is_function(Op op) { return op >= Op::Sin && op <= Op::Cosh; }
inline bool is_binary(Op op) { return op >= Op::Add && op <= Op::Div; }

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Integer exponents up to this magnitude are evaluated by repeated
/// multiplication.
inline constexpr double kMaxIntegerExponent = 1 << 30;

inline bool is_integer_exponent(double c) {
  return std::trunc(c) == c && std::fabs(c) <= kMaxIntegerExponent;
}

}  // namespace detail

class Expression {
public:
  /// The constant 0.
  Expression() : root_(zero_node()) {}
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  static Expression constant(double c) {
    if (c == 0.0 && !std::signbit(c)) return Expression();
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = c;
    return Expression(std::move(n));
  }

  static Expression variable(int k) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->index = k;
    return Expression(std::move(n));
  }

  const Node& node() const { return *root_; }
  const NodePtr& root() const { return root_; }
  Op op() const { return root_->op; }

  bool is_constant() const { return root_->op == Op::Const; }
  bool is_constant(double c) const { return is_constant() && root_->value == c; }
  double constant_value() const { return root_->value; }

  /// Expression built around an existing node pointer.
  static Expression wrap(const NodePtr& p) { return Expression(p); }

private:
  static const NodePtr& zero_node() {
    static const NodePtr zero = std::make_shared<const Node>();
    return zero;
  }

  NodePtr root_;
};

// ---- simplifying constructors ---------------------------------------------
//
// Constant folding plus identity elimination (0*a, a+0, a*1, --a, ...). No
// canonical form is promised.

namespace detail {
inline Expression make_node(Op op, const Expression& a, const Expression* b = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->lhs = a.root();
  if (b) n->rhs = b->root();
  return Expression(std::move(n));
}

inline std::optional<double> fold_function(Op op, double x) {
  double r = 0.0;
  switch (op) {
    case Op::Sin: r = std::sin(x); break;
    case Op::Cos: r = std::cos(x); break;
    case Op::Tan: r = std::tan(x); break;
    case Op::Exp: r = std::exp(x); break;
    case Op::Ln:
      if (x <= 0.0) return std::nullopt;
      r = std::log(x);
      break;
    case Op::Sqrt:
      if (x < 0.0) return std::nullopt;
      r = std::sqrt(x);
      break;
    case Op::Sinh: r = std::sinh(x); break;
    case Op::Cosh: r = std::cosh(x); break;
    default: return std::nullopt;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

/// Folded constant with −0 collapsed to 0.
inline Expression folded(double v) { return Expression::constant(v == 0.0 ? 0.0 : v); }
}  // namespace detail

inline Expression operator-(const Expression& a) {
  if (a.is_constant()) return detail::folded(-a.constant_value());
  if (a.op() == Op::Neg) return Expression::wrap(a.node().lhs);
  return detail::make_node(Op::Neg, a);
}

inline Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return detail::folded(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return detail::make_node(Op::Add, a, &b);
}

inline Expression operator-(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return detail::folded(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return detail::make_node(Op::Sub, a, &b);
}

inline Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return detail::folded(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expression();
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return detail::make_node(Op::Mul, a, &b);
}

inline Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
    return detail::folded(a.constant_value() / b.constant_value());
  if (a.is_constant(0.0)) return Expression();
  if (b.is_constant(1.0)) return a;
  return detail::make_node(Op::Div, a, &b);
}

/// a^c for a constant exponent c.
inline Expression pow(const Expression& a, double c) {
  if (c == 1.0) return a;
  if (c == 0.0) return Expression::constant(1.0);
  if (a.is_constant()) {
    const double base = a.constant_value();
    if (base > 0.0 || (detail::is_integer_exponent(c) && (base != 0.0 || c > 0.0))) {
      const double r = std::pow(base, c);
      if (std::isfinite(r)) return Expression::constant(r);
    }
  }
  return detail::make_node(Op::Pow, a, nullptr, c);
}

/// One of the elementary functions applied to `a`.
inline Expression apply(Op fn, const Expression& a) {
  if (!detail::is_function(fn)) throw Error("apply: not a function op");
  if (a.is_constant()) {
    if (auto r = detail::fold_function(fn, a.constant_value())) return Expression::constant(*r);
  }
  return detail::make_node(fn, a);
}

inline Expression operator+(const Expression& a, double b) { return a + Expression::constant(b); }
inline Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }

// ---- structure -------------------------------------------------------------

inline bool structurally_equal(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value;
    case Op::Var: return a.index == b.index;
    case Op::Pow: return a.value == b.value && structurally_equal(*a.lhs, *b.lhs);
    default: break;
  }
  if (!structurally_equal(*a.lhs, *b.lhs)) return false;
  if (detail::is_binary(a.op)) return structurally_equal(*a.rhs, *b.rhs);
  return true;
}

inline bool structurally_equal(const Expression& a, const Expression& b) {
  return structurally_equal(a.node(), b.node());
}

/// Largest coordinate index referenced, or -1 for a constant expression.
inline int max_variable_index(const Node& n) {
  switch (n.op) {
    case Op::Const: return -1;
    case Op::Var: return n.index;
    default: break;
  }
  int m = max_variable_index(*n.lhs);
  if (n.rhs) m = std::max(m, max_variable_index(*n.rhs));
  return m;
}

inline std::vector<std::string> default_coordinate_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int k = 0; k < n; ++k) names.push_back("x" + std::to_string(k));
  return names;
}

// ---- rendering -------------------------------------------------------------

namespace detail {

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

inline void render(const Node& n, std::span<const std::string> names, std::string& out) {
  auto child = [&](const Node& c, bool parens) {
    if (parens) out += '(';
    render(c, names, out);
    if (parens) out += ')';
  };
  switch (n.op) {
    case Op::Const:
      // (-c) re-parses as one constant node.
      if (std::signbit(n.value)) {
        out += '(';
        out += format_number(n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::Var:
      if (n.index >= 0 && static_cast<std::size_t>(n.index) < names.size())
        out += names[n.index];
      else
        out += "x" + std::to_string(n.index);
      return;
    case Op::Neg:
      out += '-';
      child(*n.lhs, precedence(*n.lhs) < 3);
      return;
    case Op::Pow:
      child(*n.lhs, precedence(*n.lhs) < 4);
      out += '^';
      if (std::signbit(n.value))
        out += "(" + format_number(n.value) + ")";
      else
        out += format_number(n.value);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n);
      child(*n.lhs, precedence(*n.lhs) < p);
      switch (n.op) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      child(*n.rhs, precedence(*n.rhs) <= p);
      return;
    }
    default:
      out += function_name(n.op);
      out += '(';
      render(*n.lhs, names, out);
      out += ')';
      return;
  }
}

}  // namespace detail

/// Text form that re-parses to a structurally equal tree.
inline std::string to_string(const Expression& e, std::span<const std::string> names = {}) {
  std::string out;
  detail::render(e.node(), names, out);
  return out;
}

// ---- parsing ---------------------------------------------------------------

namespace detail {

class Parser {
public:
  Parser(std::string_view text, std::span<const std::string> names, bool default_names)
      : text_(text), names_(names), default_names_(default_names) {}

  Expression parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty expression");
    Expression e = expr();
    skip_space();
    if (pos_ < text_.size()) throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return e;
  }

private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    }
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+')) {
        Expression rhs = term();
        lhs = make_node(Op::Add, lhs, &rhs);
      } else if (accept('-')) {
        Expression rhs = term();
        lhs = make_node(Op::Sub, lhs, &rhs);
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*')) {
        Expression rhs = unary();
        lhs = make_node(Op::Mul, lhs, &rhs);
      } else if (accept('/')) {
        Expression rhs = unary();
        lhs = make_node(Op::Div, lhs, &rhs);
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) {
      Expression operand = unary();
      // A negated literal is a single constant node.
      if (operand.is_constant()) return Expression::constant(-operand.constant_value());
      return make_node(Op::Neg, operand);
    }
    return power();
  }

  Expression power() {
    Expression base = primary();
    while (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      const bool negate = accept('-');
      Expression ex = primary();
      if (max_variable_index(ex.node()) >= 0) throw ParseError(at, "exponent must be a constant");
      double c = constant_value_of(ex, at);
      if (negate) c = -c;
      base = make_node(Op::Pow, base, nullptr, c);
    }
    return base;
  }

  static double constant_value_of(const Expression& e, std::size_t at);

  Expression primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_, ++count;
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError(pos_, "malformed exponent in number");
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(v))
      throw ParseError(start, "number out of range");
    return Expression::constant(v);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto fn = function_from_name(name);
      if (!fn) throw ParseError(start, "unknown function '" + std::string(name) + "'");
      ++pos_;
      Expression arg = expr();
      expect(')');
      return make_node(*fn, arg);
    }

    for (std::size_t k = 0; k < names_.size(); ++k)
      if (names_[k] == name) return Expression::variable(static_cast<int>(k));

    if (default_names_ && name.size() > 1 && name[0] == 'x' &&
        name.substr(1).find_first_not_of("0123456789") == std::string_view::npos) {
      throw ParseError(start, "unknown variable " + std::string(name) + " in dimension " +
                                  std::to_string(names_.size()));
    }
    if (function_from_name(name)) throw ParseError(pos_, "expected '(' after function '" + std::string(name) + "'");
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::span<const std::string> names_;
  bool default_names_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` with the given coordinate names.
inline Expression parse(std::string_view text, std::span<const std::string> names) {
  const auto defaults = default_coordinate_names(static_cast<int>(names.size()));
  const bool default_names = std::equal(names.begin(), names.end(), defaults.begin(), defaults.end());
  return detail::Parser(text, names, default_names).parse();
}

/// Parses `text` over coordinates x0..x{n-1}.
inline Expression parse(std::string_view text, int n) {
  if (n < 2) throw DimensionError("expression dimension must be at least 2");
  const auto names = default_coordinate_names(n);
  return parse(text, std::span<const std::string>(names));
}

// ---- evaluation ------------------------------------------------------------

namespace detail {

template <class T>
class Evaluator {
public:
  Evaluator(int n, std::span<const double> p) : n_(n), p_(p) {}

  T run(const Node& node) const { return eval(node); }

private:
  using Tr = JetTraits<T>;

  [[noreturn]] void fail(const Node& at, const char* what) const {
    // Non-owning alias for rendering; the node outlives this call.
    NodePtr alias(NodePtr{}, &at);
    throw DomainError(to_string(Expression::wrap(alias)), what);
  }

  T checked(const Node& at, T r) const {
    if (!std::isfinite(Tr::value(r))) fail(at, "non-finite value");
    return r;
  }

  T int_power(T base, long long k) const {
    T result = Tr::constant(n_, 1.0);
    bool first = true;
    while (k > 0) {
      if (k & 1) {
        result = first ? base : result * base;
        first = false;
      }
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  T eval(const Node& n) const {
    switch (n.op) {
      case Op::Const: return Tr::constant(n_, n.value);
      case Op::Var:
        if (n.index < 0 || n.index >= n_) fail(n, "variable index out of range");
        return Tr::variable(n_, n.index, p_[n.index]);
      case Op::Neg: return -eval(*n.lhs);
      case Op::Add: return eval(*n.lhs) + eval(*n.rhs);
      case Op::Sub: return eval(*n.lhs) - eval(*n.rhs);
      case Op::Mul: return eval(*n.lhs) * eval(*n.rhs);
      case Op::Div: {
        T num = eval(*n.lhs);
        T den = eval(*n.rhs);
        const double v = Tr::value(den);
        if (v == 0.0) fail(n, "division by zero");
        return checked(n, num * chain(den, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)));
      }
      case Op::Pow: {
        T a = eval(*n.lhs);
        const double c = n.value;
        const double v = Tr::value(a);
        if (is_integer_exponent(c)) {
          const long long k = static_cast<long long>(c);
          if (k == 0) return Tr::constant(n_, 1.0);
          if (k > 0) return checked(n, int_power(a, k));
          if (v == 0.0) fail(n, "division by zero");
          T inv = chain(a, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
          return checked(n, int_power(inv, -k));
        }
        if (!(v > 0.0)) fail(n, "non-integer power of non-positive base");
        const double f = std::pow(v, c);
        return checked(n, chain(a, f, c * f / v, c * (c - 1.0) * f / (v * v)));
      }
      case Op::Sin: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        const double s = std::sin(v);
        return chain(a, s, std::cos(v), -s);
      }
      case Op::Cos: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        const double c = std::cos(v);
        return chain(a, c, -std::sin(v), -c);
      }
      case Op::Tan: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        const double t = std::tan(v);
        const double sec2 = 1.0 + t * t;
        return checked(n, chain(a, t, sec2, 2.0 * t * sec2));
      }
      case Op::Exp: {
        T a = eval(*n.lhs);
        const double e = std::exp(Tr::value(a));
        return checked(n, chain(a, e, e, e));
      }
      case Op::Ln: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        if (!(v > 0.0)) fail(n, "ln of non-positive value");
        return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
      }
      case Op::Sqrt: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        if (v < 0.0) fail(n, "sqrt of negative value");
        if constexpr (!std::is_same_v<T, double>) {
          if (v == 0.0) fail(n, "sqrt is not differentiable at 0");
        }
        const double s = std::sqrt(v);
        return chain(a, s, 0.5 / s, -0.25 / (s * v));
      }
      case Op::Sinh: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        const double s = std::sinh(v);
        return checked(n, chain(a, s, std::cosh(v), s));
      }
      case Op::Cosh: {
        T a = eval(*n.lhs);
        const double v = Tr::value(a);
        const double c = std::cosh(v);
        return checked(n, chain(a, c, std::sinh(v), c));
      }
    }
    fail(n, "unknown node");
  }

  int n_;
  std::span<const double> p_;
};

inline double Parser::constant_value_of(const Expression& e, std::size_t at) {
  try {
    return Evaluator<double>(0, {}).run(e.node());
  } catch (const DomainError& err) {
    throw ParseError(at, std::string("invalid constant exponent: ") + err.what());
  }
}

}  // namespace detail

/// Value of `e` at `p` in IEEE double precision.
inline double eval(const Expression& e, std::span<const double> p) {
  return detail::Evaluator<double>(static_cast<int>(p.size()), p).run(e.node());
}

/// Value and exact gradient at `p`.
inline Jet1 eval_jet1(const Expression& e, std::span<const double> p) {
  if (p.size() > static_cast<std::size_t>(kMaxDimension)) throw DimensionError("point dimension exceeds kMaxDimension");
  return detail::Evaluator<Jet1>(static_cast<int>(p.size()), p).run(e.node());
}

/// Value, exact gradient and exact (symmetric) Hessian at `p`.
inline Jet2 eval_jet2(const Expression& e, std::span<const double> p) {
  if (p.size() > static_cast<std::size_t>(kMaxDimension)) throw DimensionError("point dimension exceeds kMaxDimension");
  return detail::Evaluator<Jet2>(static_cast<int>(p.size()), p).run(e.node());
}

// ---- symbolic differentiation ---------------------------------------------

/// d e / d x_k with elementary simplification.
inline Expression differentiate(const Expression& e, int k) {
  const Node& n = e.node();
  auto sub = [](const NodePtr& p) { return Expression::wrap(p); };
  switch (n.op) {
    case Op::Const: return Expression();
    case Op::Var: return n.index == k ? Expression::constant(1.0) : Expression();
    case Op::Neg: return -differentiate(sub(n.lhs), k);
    case Op::Add: return differentiate(sub(n.lhs), k) + differentiate(sub(n.rhs), k);
    case Op::Sub: return differentiate(sub(n.lhs), k) - differentiate(sub(n.rhs), k);
    case Op::Mul: {
      const Expression a = sub(n.lhs), b = sub(n.rhs);
      return differentiate(a, k) * b + a * differentiate(b, k);
    }
    case Op::Div: {
      const Expression a = sub(n.lhs), b = sub(n.rhs);
      const Expression da = differentiate(a, k), db = differentiate(b, k);
      return da / b - (a * db) / pow(b, 2.0);
    }
    case Op::Pow: {
      const Expression a = sub(n.lhs);
      const Expression da = differentiate(a, k);
      if (da.is_constant(0.0)) return Expression();
      return (Expression::constant(n.value) * pow(a, n.value - 1.0)) * da;
    }
    default: break;
  }

  const Expression a = sub(n.lhs);
  const Expression da = differentiate(a, k);
  if (da.is_constant(0.0)) return Expression();
  switch (n.op) {
    case Op::Sin: return apply(Op::Cos, a) * da;
    case Op::Cos: return -(apply(Op::Sin, a) * da);
    case Op::Tan: return da / pow(apply(Op::Cos, a), 2.0);
    case Op::Exp: return e * da;
    case Op::Ln: return da / a;
    case Op::Sqrt: return da / (Expression::constant(2.0) * e);
    case Op::Sinh: return apply(Op::Cosh, a) * da;
    case Op::Cosh: return apply(Op::Sinh, a) * da;
    default: break;
  }
  throw Error("differentiate: unknown node");
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_EXPR_HPP
