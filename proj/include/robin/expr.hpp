#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robin {

// Scalar expression in the single variable `s`.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative, integer exponent
//   primary := number | 's' | func '(' args ')' | '(' expr ')'
// Functions: exp, log, sin, cos, abs (one argument), max, min (two arguments).
class Expr {
public:
  enum class Kind {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,  // integer exponent held in `exponent`
    Exp,
    Log,
    Sin,
    Cos,
    Abs,
    Max,
    Min,
    Sign,       // derivative helper for abs; sign(0) = 0
    Heaviside,  // derivative helper for max/min; H(x) = 1 for x >= 0
  };

  struct Node;

  Expr();  // the constant 0
  static Expr constant(double value);
  static Expr variable();

  Kind kind() const;
  double value() const;   // Constant only
  int exponent() const;   // Pow only
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool depends_on_variable() const;

  // Tree-walking evaluation. Throws Error(Evaluation) on division by zero,
  // log of a nonpositive value, or a non-finite result.
  double evaluate(double s) const;

  Expr derivative() const;
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, int exponent);
  static Expr unary(Kind kind, const Expr& arg);
  static Expr binary(Kind kind, const Expr& a, const Expr& b);

private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr parse_expr(std::string_view text);

// Coefficients c_0..c_d when `expr` is a polynomial in s of degree <= 32.
std::optional<std::vector<double>> polynomial_coefficients(const Expr& expr);

// Flattened postfix form of an Expr for fast repeated evaluation. Same error
// semantics as Expr::evaluate. Polynomials are evaluated in Horner form.
class Program {
public:
  Program() = default;
  explicit Program(const Expr& expr);

  double operator()(double s) const;
  std::size_t size() const { return code_.size(); }
  bool is_polynomial() const { return !horner_.empty(); }

private:
  struct Instr {
    Expr::Kind op;
    double value;  // Constant payload
    int exponent;  // Pow payload
  };
  std::vector<Instr> code_;
  std::vector<double> horner_;  // highest degree first
  std::size_t max_depth_ = 0;
};

}  // namespace robin
