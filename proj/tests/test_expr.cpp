#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "equiaffine/expr.hpp"
#include "equiaffine/suite.hpp"
#include "oracles.hpp"

using namespace equiaffine;
using Catch::Approx;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return std::vector<double>(v); }

// Raw (unsimplified) random trees in the shape the parser produces.
Expression random_tree(suite::Rng& rng, int n, int depth) {
  if (depth == 0 || rng.below(4) == 0) {
    if (rng.below(2) == 0) return Expression::variable(rng.below(n));
    return Expression::constant(std::round(rng.uniform(-50, 50) * 8) / 8);
  }
  const int kind = rng.below(6);
  if (kind == 0) {
    Expression a = random_tree(rng, n, depth - 1);
    if (a.is_constant()) return a;
    return detail::make_node(Op::Neg, a);
  }
  if (kind == 1) {
    const Op fns[] = {Op::Sin, Op::Cos, Op::Tan, Op::Exp, Op::Ln, Op::Sqrt, Op::Sinh, Op::Cosh};
    return detail::make_node(fns[rng.below(8)], random_tree(rng, n, depth - 1));
  }
  if (kind == 2) {
    const double exps[] = {2, 3, -1, 0.5, -2.5, 1e-3};
    return detail::make_node(Op::Pow, random_tree(rng, n, depth - 1), nullptr, exps[rng.below(6)]);
  }
  const Op ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};
  Expression b = random_tree(rng, n, depth - 1);
  return detail::make_node(ops[rng.below(4)], random_tree(rng, n, depth - 1), &b);
}

// One function per node type, all defined on [-1, 1]^3.
const char* const kNodeCoverage[] = {
    "x0*x1 + 1",
    "x0 - x2",
    "-x1",
    "x0/(2 + x1)",
    "x0^3 - 2*x1^2*x2",
    "(1.5 + x1)^(-2)",
    "(2 + x0)^2.5",
    "sin(x0*x1)",
    "cos(x0 + 2*x2)",
    "tan(0.5*x1)",
    "exp(x0 - x1*x2)",
    "ln(3 + x0*x1)",
    "sqrt(2 + sin(x2))",
    "sinh(x1 - x0)",
    "cosh(x0*x2)",
    "x0*sin(x1)^2/(1.5 + cos(x2)) - ln(2 + x0^2)*exp(-x1)",
};

}  // namespace

TEST_CASE("parse evaluates simple arithmetic", "[expr]") {
  const Expression e = parse("x0*x1 + 1", 2);
  CHECK(eval(e, pt({2, 3})) == 7.0);
  CHECK(eval(parse("exp(0)", 2), pt({0.3, -7})) == 1.0);
  CHECK(eval(parse("x1*cos(x0)", 2), pt({0, 2})) == 2.0);
}

TEST_CASE("operator precedence and associativity", "[expr]") {
  const auto p = pt({2, 3});
  CHECK(eval(parse("-x0^2", 2), p) == -4.0);
  CHECK(eval(parse("x0 - x1 - 1", 2), p) == -2.0);
  CHECK(eval(parse("x1 / x0 / 2", 2), p) == 0.75);
  CHECK(eval(parse("x0^2^3", 2), p) == 64.0);
  CHECK(eval(parse("2*-x1", 2), p) == -6.0);
  CHECK(eval(parse("x0^-1", 2), p) == 0.5);
  CHECK(eval(parse("x0^(1/2)", 2), p) == Approx(std::sqrt(2.0)));
  CHECK(eval(parse("1.5e1 + .5", 2), p) == 15.5);
}

TEST_CASE("parse errors carry a position", "[expr]") {
  try {
    parse("sin(x2)", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(std::string(e.what()).find("unknown variable x2 in dimension 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("x0 +", 2), ParseError);
  CHECK_THROWS_AS(parse("(x0", 2), ParseError);
  CHECK_THROWS_AS(parse("foo(x0)", 2), ParseError);
  CHECK_THROWS_AS(parse("y", 2), ParseError);
  CHECK_THROWS_AS(parse("x0^x1", 2), ParseError);
  CHECK_THROWS_AS(parse("", 2), ParseError);
  CHECK_THROWS_AS(parse("1e", 2), ParseError);
  CHECK_THROWS_AS(parse("x0 x1", 2), ParseError);
  CHECK_THROWS_AS(parse("x0", 1), DimensionError);
}

TEST_CASE("custom coordinate names", "[expr]") {
  const std::vector<std::string> names{"r", "theta"};
  const Expression e = parse("r^2*sin(theta)", names);
  CHECK(eval(e, pt({2, M_PI / 2})) == Approx(4.0));
  CHECK(to_string(e, names) == "r^2*sin(theta)");
  CHECK_THROWS_AS(parse("x0", names), ParseError);
}

TEST_CASE("render then parse reproduces the tree", "[expr][property]") {
  const Expression e = parse("x0^2 - -x1", 2);
  CHECK(to_string(e) == "x0^2 - -x1");
  CHECK(structurally_equal(parse(to_string(e), 2), e));

  suite::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Expression t = random_tree(rng, 3, 5);
    const std::string text = to_string(t);
    INFO(text);
    REQUIRE(structurally_equal(parse(text, 3), t));
  }
}

TEST_CASE("parser never fails other than with ParseError", "[expr][property]") {
  const std::vector<std::string> tokens{"x0", "x1", "x7", "1", "2.5", "1e3", ".", "e", "+", "-", "*", "/", "^",
                                        "(", ")", "sin", "ln", "sqrt", " ", "y", "$", "1e", "0x"};
  suite::Rng rng(5);
  int parsed = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    const int len = 1 + rng.below(12);
    for (int k = 0; k < len; ++k) text += tokens[rng.below(static_cast<int>(tokens.size()))];
    try {
      const Expression e = parse(text, 2);
      ++parsed;
      CHECK(max_variable_index(e.node()) < 2);
    } catch (const ParseError& e) {
      CHECK(e.position() <= text.size());
    }
  }
  CHECK(parsed > 0);
}

TEST_CASE("evaluation domain errors name the subtree", "[expr]") {
  try {
    eval(parse("1/x0", 2), pt({0, 0}));
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subtree() == "1/x0");
    CHECK(e.reason() == "division by zero");
  }
  CHECK_THROWS_AS(eval(parse("ln(x0)", 2), pt({-1, 0})), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(x0 - 1)", 2), pt({0, 0})), DomainError);
  CHECK_THROWS_AS(eval(parse("x0^0.5", 2), pt({-1, 0})), DomainError);
  CHECK_THROWS_AS(eval(parse("x0^-2", 2), pt({0, 1})), DomainError);
  CHECK_THROWS_AS(eval(parse("exp(x0)", 2), pt({1000, 0})), DomainError);
  CHECK_THROWS_AS(eval_jet1(parse("sqrt(x0)", 2), pt({0, 0})), DomainError);
  CHECK(eval(parse("sqrt(x0)", 2), pt({0, 0})) == 0.0);
}

TEST_CASE("first-order jets", "[expr][jet]") {
  const Jet1 j = eval_jet1(parse("x0*x1", 2), pt({2, 3}));
  CHECK(j.value == 6.0);
  CHECK(j.gradient[0] == 3.0);
  CHECK(j.gradient[1] == 2.0);

  const Jet1 s = eval_jet1(parse("sin(x0)", 3), pt({0, 0.4, 0.7}));
  CHECK(s.value == 0.0);
  CHECK(s.gradient[0] == 1.0);
  CHECK(s.gradient[1] == 0.0);
  CHECK(s.gradient[2] == 0.0);
}

TEST_CASE("second-order jets", "[expr][jet]") {
  const Jet2 sq = eval_jet2(parse("x0^2", 2), pt({0.3, -1.2}));
  CHECK(sq.hessian(0, 0) == 2.0);
  CHECK(sq.hessian(0, 1) == 0.0);
  CHECK(sq.hessian(1, 0) == 0.0);
  CHECK(sq.hessian(1, 1) == 0.0);

  const Jet2 xy = eval_jet2(parse("x0*x1", 2), pt({0.3, -1.2}));
  CHECK(xy.hessian(0, 0) == 0.0);
  CHECK(xy.hessian(1, 1) == 0.0);
  CHECK(xy.hessian(0, 1) == 1.0);
  CHECK(xy.hessian(1, 0) == 1.0);
}

TEST_CASE("jets agree with finite differences on every node type", "[expr][jet][property]") {
  suite::Rng rng(2024);
  for (const char* text : kNodeCoverage) {
    const Expression e = parse(text, 3);
    const auto f = oracle::scalar(e);
    double grad_err = 0.0, hess_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const Jet1 j1 = eval_jet1(e, p);
      const Jet2 j2 = eval_jet2(e, p);
      REQUIRE(j1.value == eval(e, p));
      REQUIRE(j2.value == j1.value);
      const auto g = oracle::gradient(f, p);
      const auto H = oracle::hessian(f, p);
      for (int i = 0; i < 3; ++i) {
        REQUIRE(j2.gradient[i] == Approx(j1.gradient[i]).epsilon(1e-14).margin(1e-14));
        grad_err = std::max(grad_err, std::fabs(j1.gradient[i] - g[i]) / std::max(1.0, std::fabs(g[i])));
        for (int k = 0; k < 3; ++k) {
          REQUIRE(j2.hessian(i, k) == j2.hessian(k, i));
          hess_err = std::max(hess_err, std::fabs(j2.hessian(i, k) - H[i][k]) / std::max(1.0, std::fabs(H[i][k])));
        }
      }
    }
    INFO(text);
    CHECK(grad_err <= 1e-6);
    CHECK(hess_err <= 1e-5);
  }
}

TEST_CASE("symbolic derivatives", "[expr][diff]") {
  CHECK(to_string(differentiate(parse("x0^2", 2), 0)) == "2*x0");
  CHECK(differentiate(parse("sin(x0)", 2), 1).is_constant(0.0));
  CHECK(eval(differentiate(parse("x0/x1", 2), 0), pt({1, 2})) == 0.5);
  CHECK(eval_jet1(parse("x0/x1", 2), pt({1, 2})).gradient[0] == 0.5);
}

TEST_CASE("symbolic derivatives match jets", "[expr][diff][property]") {
  suite::Rng rng(77);
  for (const char* text : kNodeCoverage) {
    const Expression e = parse(text, 3);
    for (int k = 0; k < 3; ++k) {
      const Expression d = differentiate(e, k);
      for (int trial = 0; trial < 40; ++trial) {
        const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double expected = eval_jet1(e, p).gradient[k];
        INFO(text << " d/dx" << k);
        CHECK(eval(d, p) == Approx(expected).epsilon(1e-12).margin(1e-12));
      }
    }
  }
}

TEST_CASE("simplifying constructors", "[expr]") {
  const Expression x = Expression::variable(0);
  CHECK(structurally_equal(x + Expression(), x));
  CHECK(structurally_equal(x * Expression::constant(1.0), x));
  CHECK((x * Expression()).is_constant(0.0));
  CHECK(structurally_equal(-(-x), x));
  CHECK((Expression::constant(2.0) * Expression::constant(3.5)).is_constant(7.0));
  CHECK(pow(Expression::constant(2.0), 3).is_constant(8.0));
  CHECK(apply(Op::Cos, Expression()).is_constant(1.0));
  CHECK(to_string(Expression::constant(-1.0 / 3.0) * x) == "(-0.3333333333333333)*x0");
}
