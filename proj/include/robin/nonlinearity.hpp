#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "robin/expr.hpp"

namespace robin {

// The reaction term f together with its certified zero pair alpha < beta.
//
// Construction checks, on uniform samples, that f vanishes at both zeros, is
// positive strictly between them, and that s -> f(s) + M s is nondecreasing on
// [domain_floor, beta] for the computed shift M. A truncated nonlinearity
// evaluates f on (alpha, beta) and 0 elsewhere.
class Nonlinearity {
public:
  static constexpr int kSamples = 10001;
  static constexpr double kZeroTolerance = 1e-10;
  static constexpr double kShiftSafety = 1.1;

  double operator()(double s) const {
    if (truncated_ && !(s > alpha_ && s < beta_)) return 0.0;
    return f_prog_(s);
  }
  double derivative(double s) const {
    if (truncated_ && !(s > alpha_ && s < beta_)) return 0.0;
    return fprime_prog_(s);
  }
  // f itself, ignoring truncation.
  double raw(double s) const { return f_prog_(s); }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double shift() const { return shift_; }
  double domain_floor() const { return domain_floor_; }
  bool is_truncated() const { return truncated_; }
  const Expr& expr() const { return f_; }
  const Expr& derivative_expr() const { return fprime_; }

  // Points where the evaluated function may have a kink (truncation edges).
  std::vector<double> breakpoints() const;

private:
  friend Nonlinearity make_nonlinearity(const Expr&, double, double, double);
  friend Nonlinearity truncate(const Nonlinearity&);

  Nonlinearity() = default;
  void certify_shift();

  Expr f_;
  Expr fprime_;
  Program f_prog_;
  Program fprime_prog_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double shift_ = 0.0;
  double domain_floor_ = 0.0;
  bool truncated_ = false;
};

Nonlinearity make_nonlinearity(const Expr& f, double alpha, double beta, double domain_floor = 0.0);

// f~: f on (alpha, beta), zero outside. Idempotent.
Nonlinearity truncate(const Nonlinearity& nl);

// Composite Simpson rule with repeated panel halving. Stops when successive
// estimates agree to 1e-10 absolute or 1e-8 relative; throws
// QuadratureNonconvergence after 24 halvings. `breaks` splits the interval at
// known kinks so each piece is smooth.
double integrate_simpson(const std::function<double(double)>& g, double a, double b,
                         const std::vector<double>& breaks = {});

// Integral of the (possibly truncated) nonlinearity over [a, b]; signed for b < a.
double antiderivative(const Nonlinearity& nl, double a, double b);

struct AreaReport {
  bool holds = false;
  std::optional<double> r_alpha;
  bool degenerate = false;  // r_alpha pinned to beta
  double worst_s = 0.0;
  double worst_value = 0.0;
};

// Checks int_s^beta f > 0 for all s in [0, beta) and locates r_alpha, the
// smallest r in (alpha, beta) for which the same holds with beta replaced by r.
AreaReport area_condition(const Nonlinearity& nl);

}  // namespace robin
