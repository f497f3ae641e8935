#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "robin/error.hpp"
#include "robin/expr.hpp"
#include "robin/nonlinearity.hpp"

using namespace robin;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

Nonlinearity cubic() { return make_nonlinearity(parse_expr("s*(s-1)*(3-s)"), 1.0, 3.0, 0.0); }
Nonlinearity quad() { return make_nonlinearity(parse_expr("(s-1)*(2-s)"), 1.0, 2.0, 0.0); }

}  // namespace

TEST_CASE("parser evaluates arithmetic") {
  CHECK(parse_expr("s*(s-1)*(3-s)").evaluate(2.0) == doctest::Approx(2.0));
  CHECK(parse_expr("(s-1)*(2-s)").evaluate(1.0) == 0.0);
  CHECK(parse_expr("2^3^2").evaluate(0.0) == doctest::Approx(512.0));
  CHECK(parse_expr("-s^2").evaluate(3.0) == doctest::Approx(-9.0));
  CHECK(parse_expr("max(s, 1) - min(s, 1)").evaluate(-2.0) == doctest::Approx(3.0));
  CHECK(parse_expr(" exp( log(s) ) ").evaluate(2.5) == doctest::Approx(2.5));
  CHECK(parse_expr("1.5e1 / 3").evaluate(0.0) == doctest::Approx(5.0));
}

TEST_CASE("parser reports the offset of syntax errors") {
  try {
    parse_expr("s*(");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK(code_of([] { parse_expr("s +* 2"); }) == ErrorCode::Syntax);
  CHECK(code_of([] { parse_expr("s)"); }) == ErrorCode::Syntax);
  CHECK(code_of([] { parse_expr("x + 1"); }) == ErrorCode::UnknownIdentifier);
  CHECK(code_of([] { parse_expr("foo(s)"); }) == ErrorCode::UnknownIdentifier);
}

TEST_CASE("evaluation errors are raised, never NaN") {
  CHECK(code_of([] { parse_expr("1/s").evaluate(0.0); }) == ErrorCode::Evaluation);
  CHECK(code_of([] { parse_expr("log(s)").evaluate(-1.0); }) == ErrorCode::Evaluation);
  CHECK(code_of([] { Program(parse_expr("log(s)"))(0.0); }) == ErrorCode::Evaluation);
  CHECK(code_of([] { Program(parse_expr("1/(s-1)"))(1.0); }) == ErrorCode::Evaluation);
}

TEST_CASE("compiled program matches the tree") {
  for (const char* text : {"s*(s-1)*(3-s)", "exp(-s)*sin(3*s) + abs(s-1)", "(s^2 - 2)/(1 + s^2)", "max(s,0)^3"}) {
    const Expr e = parse_expr(text);
    const Program p(e);
    for (double s = -2.0; s <= 3.0; s += 0.137) CHECK(p(s) == doctest::Approx(e.evaluate(s)).epsilon(1e-13));
  }
  CHECK(Program(parse_expr("s*(s-1)*(3-s)")).is_polynomial());
  CHECK_FALSE(Program(parse_expr("exp(s)")).is_polynomial());
}

TEST_CASE("symbolic derivative agrees with centred differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pick(0.1, 2.9);
  for (const char* text : {"s*(s-1)*(3-s)", "(s-1)*(2-s)", "exp(-s)*sin(3*s)", "log(1+s^2)/(2+cos(s))",
                           "s^5 - 3*s^2 + 1", "(s-1)*(2-s)*exp(s/4)"}) {
    const Expr e = parse_expr(text);
    const Expr d = e.derivative();
    for (int k = 0; k < 50; ++k) {
      const double s = pick(rng);
      const double fd = (e.evaluate(s + 1e-6) - e.evaluate(s - 1e-6)) / 2e-6;
      const double sym = d.evaluate(s);
      CHECK(std::fabs(sym - fd) <= 1e-5 * std::max(1.0, std::fabs(sym)));
    }
  }
}

TEST_CASE("polynomial coefficients") {
  const auto c = polynomial_coefficients(parse_expr("s*(s-1)*(3-s)"));
  REQUIRE(c.has_value());
  REQUIRE(c->size() == 4);
  CHECK((*c)[0] == doctest::Approx(0.0));
  CHECK((*c)[1] == doctest::Approx(-3.0));
  CHECK((*c)[2] == doctest::Approx(4.0));
  CHECK((*c)[3] == doctest::Approx(-1.0));
  CHECK_FALSE(polynomial_coefficients(parse_expr("1/s")).has_value());
}

TEST_CASE("shift constant and certificates") {
  CHECK(cubic().shift() == doctest::Approx(6.6));
  CHECK(quad().shift() == doctest::Approx(1.1));
  CHECK(code_of([] { make_nonlinearity(parse_expr("s*(s-1)*(3-s)"), 1.0, 2.5, 0.0); }) ==
        ErrorCode::ZeroCertificationFailed);
  CHECK(code_of([] { make_nonlinearity(parse_expr("-(s-1)*(2-s)"), 1.0, 2.0, 0.0); }) ==
        ErrorCode::PositivityFailed);
  // f + M s must be nondecreasing for every shift in use.
  const auto nl = cubic();
  double prev = nl.raw(0.0);
  for (int i = 1; i <= 10000; ++i) {
    const double s = 3.0 * i / 10000;
    const double cur = nl.raw(s) + nl.shift() * s;
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
}

TEST_CASE("truncation") {
  const auto t = truncate(cubic());
  CHECK(t(2.0) == doctest::Approx(oracle::cubic(2.0)));
  CHECK(t(0.9) == 0.0);
  CHECK(t(8.0) == 0.0);
  CHECK(t.derivative(-1.0) == 0.0);
  CHECK(truncate(t)(2.5) == t(2.5));
  CHECK(t.is_truncated());
}

TEST_CASE("antiderivative matches closed forms") {
  CHECK(antiderivative(cubic(), 0.0, 3.0) == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(antiderivative(quad(), 0.0, 2.0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-10));
  CHECK(antiderivative(cubic(), 1.7, 1.7) == 0.0);
  CHECK(antiderivative(truncate(cubic()), 0.0, 3.0) ==
        doctest::Approx(oracle::cubic_primitive(3.0) - oracle::cubic_primitive(1.0)).epsilon(1e-10));
  CHECK(antiderivative(cubic(), 2.0, 0.5) ==
        doctest::Approx(oracle::cubic_primitive(0.5) - oracle::cubic_primitive(2.0)).epsilon(1e-10));
}

TEST_CASE("area condition") {
  const auto c = area_condition(cubic());
  CHECK(c.holds);
  CHECK(c.worst_s == doctest::Approx(0.0));
  CHECK(c.worst_value == doctest::Approx(2.25).epsilon(1e-9));
  REQUIRE(c.r_alpha.has_value());
  CHECK(std::fabs(*c.r_alpha - oracle::cubic_r_alpha()) < 1e-4);

  const auto q = area_condition(quad());
  CHECK_FALSE(q.holds);
  CHECK(q.worst_s == doctest::Approx(0.0));
  CHECK(std::fabs(q.worst_value + 2.0 / 3.0) < 1e-8);

  const auto t = area_condition(truncate(cubic()));
  CHECK(t.holds);
  REQUIRE(t.r_alpha.has_value());
  CHECK(*t.r_alpha == doctest::Approx(1.0).epsilon(1e-4));
}
