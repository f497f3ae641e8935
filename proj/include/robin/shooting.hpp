#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "robin/error.hpp"

namespace robin {

// Fixed-step RK4 for the radial initial value problem
//   u'' + (N-1)/r u' + lambda g(u) = 0,  u(0) = s0,  u'(0) = 0,
// using u''(0) = -lambda g(s0)/N at the origin.
struct RadialIvp {
  std::function<double(double)> g;
  double lambda = 1.0;
  int dim = 1;
  double radius = 1.0;
  int steps = 4096;
  double lower_bound = -0.1;  // escape guards
  double upper_bound = 1e300;
};

struct Shot {
  double start = 0.0;
  bool escaped = false;
  ErrorCode escape = ErrorCode::EscapeBelow;
  double escape_radius = 0.0;
  double end_value = 0.0;  // u(R)
  double end_slope = 0.0;  // u'(R)
  double min_value = 0.0;
  double max_value = 0.0;
  // Filled only when requested.
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
};

Shot integrate_radial(const RadialIvp& ivp, double s0, bool keep_trajectory);

// Boundary mismatch of a shot: u'(R) + gamma u(R) (Robin), u'(R) (Neumann) or
// u(R) (Dirichlet). Escaped shots get the sign of the side they left through.
struct Mismatch {
  bool valid = false;
  double value = 0.0;
  int sign = 0;
};

// Brackets and bisects sign changes of `mismatch` over `scan_points` interior
// samples of (lo, hi) plus the two endpoints. Roots come back sorted and
// deduplicated.
// If `stop` is given it is called on each confirmed root and the search ends
// when it returns true.
std::vector<double> shooting_roots(const std::function<Mismatch(double)>& mismatch, double lo, double hi,
                                   int scan_points, const std::function<bool(double)>& stop = {});

}  // namespace robin
