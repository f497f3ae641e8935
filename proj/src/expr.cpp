#include "robin/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "robin/error.hpp"

namespace robin {

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  int exponent = 0;
  // Leaves keep null children so building the shared zero never recurses.
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
};

namespace {

std::shared_ptr<const Expr::Node> zero_node() {
  static const auto node = std::make_shared<const Expr::Node>(Expr::Node{Expr::Kind::Constant});
  return node;
}

[[noreturn]] void eval_error(const std::string& what) { throw Error(ErrorCode::Evaluation, what); }

double apply_unary(Expr::Kind kind, double x, int exponent) {
  switch (kind) {
    case Expr::Kind::Neg: return -x;
    case Expr::Kind::Pow:
      if (x == 0.0 && exponent < 0) eval_error("division by zero in negative power");
      return std::pow(x, exponent);
    case Expr::Kind::Exp: return std::exp(x);
    case Expr::Kind::Log:
      if (!(x > 0.0)) eval_error("log of nonpositive value " + std::to_string(x));
      return std::log(x);
    case Expr::Kind::Sin: return std::sin(x);
    case Expr::Kind::Cos: return std::cos(x);
    case Expr::Kind::Abs: return std::fabs(x);
    case Expr::Kind::Sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case Expr::Kind::Heaviside: return x >= 0.0 ? 1.0 : 0.0;
    default: break;
  }
  eval_error("bad unary opcode");
}

double apply_binary(Expr::Kind kind, double x, double y) {
  switch (kind) {
    case Expr::Kind::Add: return x + y;
    case Expr::Kind::Sub: return x - y;
    case Expr::Kind::Mul: return x * y;
    case Expr::Kind::Div:
      if (y == 0.0) eval_error("division by zero");
      return x / y;
    case Expr::Kind::Max: return x >= y ? x : y;
    case Expr::Kind::Min: return x <= y ? x : y;
    default: break;
  }
  eval_error("bad binary opcode");
}

bool is_binary(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
    case Expr::Kind::Max:
    case Expr::Kind::Min: return true;
    default: return false;
  }
}

bool is_const(const Expr& e, double v) { return e.is_constant() && e.value() == v; }

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::constant(double value) {
  return Expr(std::make_shared<const Node>(Node{Kind::Constant, value}));
}

Expr Expr::variable() { return Expr(std::make_shared<const Node>(Node{Kind::Variable})); }

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool Expr::depends_on_variable() const {
  switch (kind()) {
    case Kind::Constant: return false;
    case Kind::Variable: return true;
    default:
      if (is_binary(kind())) return lhs().depends_on_variable() || rhs().depends_on_variable();
      return lhs().depends_on_variable();
  }
}

Expr Expr::unary(Kind kind, const Expr& arg) {
  if (arg.is_constant() && kind != Kind::Pow) return constant(apply_unary(kind, arg.value(), 0));
  return Expr(std::make_shared<const Node>(Node{kind, 0.0, 0, arg, Expr()}));
}

Expr Expr::binary(Kind kind, const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return constant(apply_binary(kind, a.value(), b.value()));
  return Expr(std::make_shared<const Node>(Node{kind, 0.0, 0, a, b}));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::binary(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return -b;
  return Expr::binary(Expr::Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return Expr::binary(Expr::Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(a, 0.0) && !is_const(b, 0.0)) return Expr::constant(0.0);
  return Expr::binary(Expr::Kind::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::Neg) return a.lhs();
  return Expr::unary(Expr::Kind::Neg, a);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) return Expr::constant(apply_unary(Expr::Kind::Pow, base.value(), exponent));
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Kind::Pow, 0.0, exponent, base, Expr()}));
}

double Expr::evaluate(double s) const {
  double result = 0.0;
  switch (kind()) {
    case Kind::Constant: result = value(); break;
    case Kind::Variable: result = s; break;
    case Kind::Pow: result = apply_unary(Kind::Pow, lhs().evaluate(s), exponent()); break;
    default:
      if (is_binary(kind()))
        result = apply_binary(kind(), lhs().evaluate(s), rhs().evaluate(s));
      else
        result = apply_unary(kind(), lhs().evaluate(s), 0);
  }
  if (!std::isfinite(result)) eval_error("non-finite value at s=" + std::to_string(s));
  return result;
}

Expr Expr::derivative() const {
  const Expr& a = lhs();
  const Expr& b = rhs();
  switch (kind()) {
    case Kind::Constant: return constant(0.0);
    case Kind::Variable: return constant(1.0);
    case Kind::Add: return a.derivative() + b.derivative();
    case Kind::Sub: return a.derivative() - b.derivative();
    case Kind::Mul: return a.derivative() * b + a * b.derivative();
    case Kind::Div: return (a.derivative() * b - a * b.derivative()) / pow(b, 2);
    case Kind::Neg: return -a.derivative();
    case Kind::Pow:
      return Expr::constant(exponent()) * pow(a, exponent() - 1) * a.derivative();
    case Kind::Exp: return *this * a.derivative();
    case Kind::Log: return a.derivative() / a;
    case Kind::Sin: return unary(Kind::Cos, a) * a.derivative();
    case Kind::Cos: return -(unary(Kind::Sin, a) * a.derivative());
    case Kind::Abs: return unary(Kind::Sign, a) * a.derivative();
    case Kind::Max: {
      Expr h = unary(Kind::Heaviside, a - b);
      return h * a.derivative() + (constant(1.0) - h) * b.derivative();
    }
    case Kind::Min: {
      Expr h = unary(Kind::Heaviside, b - a);
      return h * a.derivative() + (constant(1.0) - h) * b.derivative();
    }
    case Kind::Sign:
    case Kind::Heaviside: return constant(0.0);
  }
  return constant(0.0);
}

std::string Expr::to_string() const {
  std::ostringstream out;
  out.precision(17);
  auto fn = [&](const char* name) { out << name << '(' << lhs().to_string() << ')'; };
  switch (kind()) {
    case Kind::Constant:
      if (value() < 0) out << '(' << value() << ')';
      else out << value();
      break;
    case Kind::Variable: out << 's'; break;
    case Kind::Add: out << '(' << lhs().to_string() << " + " << rhs().to_string() << ')'; break;
    case Kind::Sub: out << '(' << lhs().to_string() << " - " << rhs().to_string() << ')'; break;
    case Kind::Mul: out << '(' << lhs().to_string() << " * " << rhs().to_string() << ')'; break;
    case Kind::Div: out << '(' << lhs().to_string() << " / " << rhs().to_string() << ')'; break;
    case Kind::Neg: out << "(-" << lhs().to_string() << ')'; break;
    case Kind::Pow: out << '(' << lhs().to_string() << ")^(" << exponent() << ')'; break;
    case Kind::Exp: fn("exp"); break;
    case Kind::Log: fn("log"); break;
    case Kind::Sin: fn("sin"); break;
    case Kind::Cos: fn("cos"); break;
    case Kind::Abs: fn("abs"); break;
    case Kind::Sign: fn("sign"); break;
    case Kind::Heaviside: fn("step"); break;
    case Kind::Max: out << "max(" << lhs().to_string() << ", " << rhs().to_string() << ')'; break;
    case Kind::Min: out << "min(" << lhs().to_string() << ", " << rhs().to_string() << ')'; break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = Expr::binary(Expr::Kind::Add, e, term());
      else if (accept('-')) e = Expr::binary(Expr::Kind::Sub, e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = Expr::binary(Expr::Kind::Mul, e, unary());
      else if (accept('/')) e = Expr::binary(Expr::Kind::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Expr::Kind::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    Expr ex = unary();
    if (ex.depends_on_variable()) throw SyntaxError(at, "exponent must be an integer constant");
    const double v = ex.evaluate(0.0);
    if (v != std::floor(v) || std::fabs(v) > 1024) throw SyntaxError(at, "exponent must be an integer constant");
    return robin::pow(base, static_cast<int>(v));
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "s") return Expr::variable();

    struct Fn {
      std::string_view name;
      Expr::Kind kind;
      int arity;
    };
    static constexpr std::array<Fn, 7> table{{{"exp", Expr::Kind::Exp, 1},
                                               {"log", Expr::Kind::Log, 1},
                                               {"sin", Expr::Kind::Sin, 1},
                                               {"cos", Expr::Kind::Cos, 1},
                                               {"abs", Expr::Kind::Abs, 1},
                                               {"max", Expr::Kind::Max, 2},
                                               {"min", Expr::Kind::Min, 2}}};
    for (const Fn& fn : table) {
      if (fn.name != name) continue;
      expect('(');
      Expr a = expression();
      if (fn.arity == 1) {
        expect(')');
        return Expr::unary(fn.kind, a);
      }
      expect(',');
      Expr b = expression();
      expect(')');
      return Expr::binary(fn.kind, a, b);
    }
    throw Error(ErrorCode::UnknownIdentifier,
                "unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start));
  }
};

}  // namespace

Expr parse_expr(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (static_cast<unsigned char>(text[i]) > 127) throw SyntaxError(i, "non-ASCII byte");
  }
  return Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Program

namespace {

using Poly = std::vector<double>;
constexpr std::size_t kMaxDegree = 32;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::optional<Poly> to_poly(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant: return Poly{e.value()};
    case K::Variable: return Poly{0.0, 1.0};
    case K::Neg: {
      auto a = to_poly(e.lhs());
      if (!a) return std::nullopt;
      for (double& c : *a) c = -c;
      return a;
    }
    case K::Add:
    case K::Sub: {
      auto a = to_poly(e.lhs());
      auto b = to_poly(e.rhs());
      if (!a || !b) return std::nullopt;
      a->resize(std::max(a->size(), b->size()), 0.0);
      const double sg = e.kind() == K::Add ? 1.0 : -1.0;
      for (std::size_t i = 0; i < b->size(); ++i) (*a)[i] += sg * (*b)[i];
      return a;
    }
    case K::Mul: {
      auto a = to_poly(e.lhs());
      auto b = to_poly(e.rhs());
      if (!a || !b || a->size() + b->size() - 2 > kMaxDegree) return std::nullopt;
      return poly_mul(*a, *b);
    }
    case K::Pow: {
      if (e.exponent() < 0) return std::nullopt;
      auto a = to_poly(e.lhs());
      if (!a || (a->size() - 1) * static_cast<std::size_t>(e.exponent()) > kMaxDegree) return std::nullopt;
      Poly out{1.0};
      for (int k = 0; k < e.exponent(); ++k) out = poly_mul(out, *a);
      return out;
    }
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<std::vector<double>> polynomial_coefficients(const Expr& expr) { return to_poly(expr); }

Program::Program(const Expr& expr) {
  if (auto poly = to_poly(expr)) horner_.assign(poly->rbegin(), poly->rend());
  // Post-order emission; track stack depth for the evaluator.
  struct Frame {
    const Expr* e;
    bool expanded;
  };
  std::vector<Frame> work{{&expr, false}};
  std::size_t depth = 0;
  while (!work.empty()) {
    Frame f = work.back();
    work.pop_back();
    const Expr& e = *f.e;
    const Expr::Kind k = e.kind();
    if (k == Expr::Kind::Constant || k == Expr::Kind::Variable) {
      code_.push_back({k, e.value(), 0});
      max_depth_ = std::max(max_depth_, ++depth);
      continue;
    }
    if (f.expanded) {
      code_.push_back({k, 0.0, k == Expr::Kind::Pow ? e.exponent() : 0});
      if (is_binary(k)) --depth;
      continue;
    }
    work.push_back({&e, true});
    if (is_binary(k)) work.push_back({&e.rhs(), false});
    work.push_back({&e.lhs(), false});
  }
}

namespace {

template <class Instr>
double run_program(const std::vector<Instr>& code, double s, double* stack) {
  std::size_t top = 0;
  for (const Instr& in : code) {
    switch (in.op) {
      case Expr::Kind::Constant: stack[top++] = in.value; break;
      case Expr::Kind::Variable: stack[top++] = s; break;
      case Expr::Kind::Add: --top; stack[top - 1] += stack[top]; break;
      case Expr::Kind::Sub: --top; stack[top - 1] -= stack[top]; break;
      case Expr::Kind::Mul: --top; stack[top - 1] *= stack[top]; break;
      case Expr::Kind::Div:
      case Expr::Kind::Max:
      case Expr::Kind::Min:
        --top;
        stack[top - 1] = apply_binary(in.op, stack[top - 1], stack[top]);
        break;
      case Expr::Kind::Neg: stack[top - 1] = -stack[top - 1]; break;
      default: stack[top - 1] = apply_unary(in.op, stack[top - 1], in.exponent); break;
    }
  }
  return top ? stack[0] : 0.0;
}

}  // namespace

double Program::operator()(double s) const {
  double result;
  if (!horner_.empty()) {
    result = 0.0;
    for (double c : horner_) result = result * s + c;
  } else if (max_depth_ <= 64) {
    double stack[64];  // every slot is written before it is read
    result = run_program(code_, s, stack);
  } else {
    std::vector<double> stack(max_depth_);
    result = run_program(code_, s, stack.data());
  }
  if (!std::isfinite(result)) [[unlikely]]
    eval_error("non-finite value at s=" + std::to_string(s));
  return result;
}

}  // namespace robin
