#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "robin/discretization.hpp"
#include "robin/nonlinearity.hpp"
#include "robin/shooting.hpp"

namespace robin {

enum class Source { Monotone, Shooting, Newton };
std::string_view to_string(Source source);

// One computed solution of -Delta u = lambda f(u) with its summary numbers.
// Grid profiles hold values at the grid nodes; shooting profiles hold the
// dense RK4 trajectory (with slopes).
struct SolutionProfile {
  std::vector<double> r;
  std::vector<double> values;
  std::vector<double> slopes;  // shooting only
  double lambda = 0.0;
  double sup_norm = 0.0;
  double min_value = 0.0;
  // Grid profiles: sup-norm of the discrete PDE + boundary residual.
  // Shooting profiles: |boundary mismatch| at the accepted start value.
  double residual = 0.0;
  Source source = Source::Monotone;
  double center_value = 0.0;
  double boundary_value = 0.0;
  double boundary_slope = 0.0;
  bool converged = false;
  int iterations = 0;

  bool nonnegative() const { return min_value >= -1e-8; }
  // Membership in the set of nonnegative profiles with alpha < sup < beta.
  bool in_order_interval(double alpha, double beta) const {
    return nonnegative() && sup_norm > alpha + 1e-6 && sup_norm < beta - 1e-6;
  }
  // Values at the nodes of `grid`: Hermite interpolation of a trajectory,
  // linear interpolation of a grid profile on a different grid.
  std::vector<double> on_grid(const Grid& grid) const;
};

// Builds a grid profile (summary numbers and discrete residual) from values.
SolutionProfile make_grid_profile(const Nonlinearity& nl, double lambda, const Grid& grid,
                                  const BoundaryCondition& bc, std::vector<double> values, Source source);

// Sup-norm of A u - lambda f(u) with the c = 0 operator (Dirichlet row: u_n).
std::vector<double> discrete_residual(const Nonlinearity& nl, double lambda, const Grid& grid,
                                      const BoundaryCondition& bc, std::span<const double> u);

// K(w1) = (-Delta + lambda M)^{-1} (lambda f(w1) + lambda M w1).
std::vector<double> apply_K(const Nonlinearity& nl, double lambda, const Grid& grid,
                            const BoundaryCondition& bc, std::span<const double> w1);

struct MonotoneOptions {
  int max_iterations = 100000;
  double tolerance = 1e-9;
  bool keep_trace = false;
  bool throw_on_limit = true;
};

struct MonotoneResult {
  SolutionProfile profile;
  std::vector<std::vector<double>> trace;  // u^0 = beta, u^1, ... when requested
  double max_rise = 0.0;                   // max_k max_i (u^{k+1}_i - u^k_i)
  double last_increment = 0.0;
};

// Iterates u^{k+1} = K(u^k) from u^0 = beta. Stops once the sup increment is
// below the tolerance and the discrete residual is at most 1e-7, or the
// increment reaches the rounding floor.
MonotoneResult monotone_iterate_traced(const Nonlinearity& nl, double lambda, const Grid& grid,
                                       const BoundaryCondition& bc, const MonotoneOptions& options = {});
SolutionProfile monotone_iterate(const Nonlinearity& nl, double lambda, const Grid& grid,
                                 const BoundaryCondition& bc, const MonotoneOptions& options = {});

// Radial RK4 shot from u(0) = s0 with the escape guards domain_floor - 0.1 and
// beta + 0.1. Throws EscapeError when the trajectory leaves that band.
SolutionProfile shoot(const Nonlinearity& nl, double lambda, const RadialDomain& domain, double s0,
                      const BoundaryCondition& bc = BoundaryCondition::neumann(), int steps = 4096);

Mismatch boundary_mismatch(const Shot& shot, const BoundaryCondition& bc);

struct ShootingOptions {
  int steps = 4096;
  int scan_points = 2000;
  // Stop at the first profile in the order interval (existence probes).
  bool stop_at_first_in_order_interval = false;
};

// All radial solutions found by scanning u(0) over (0, beta), sorted by sup-norm.
std::vector<SolutionProfile> find_radial_solutions(const Nonlinearity& nl, double lambda,
                                                   const RadialDomain& domain, const BoundaryCondition& bc,
                                                   const ShootingOptions& options = {});

struct NewtonOptions {
  int max_steps = 200;
  double tolerance = 1e-10;  // on h^2 * |F|_sup
  double deflation_shift = 1e-4;
};

// Damped Newton on F(u) = A u - lambda f(u) with optional deflation of known
// solutions.
SolutionProfile newton_refine(const Nonlinearity& nl, double lambda, const Grid& grid,
                              const BoundaryCondition& bc, std::span<const double> initial,
                              const std::vector<SolutionProfile>& deflation = {},
                              const NewtonOptions& options = {});

struct EnergyReport {
  double value = 0.0;
  double C1 = 0.0;  // beta^2 |dOmega| / 2
  double C2 = 0.0;  // |Omega| F~(beta)
  double lambda_bar = 0.0;
};

// Discrete I(u) = 1/2 int |grad u|^2 + gamma/2 int_dOmega u^2 - lambda int F~(u).
EnergyReport energy(const Nonlinearity& nl, double lambda, double gamma, const Grid& grid,
                    std::span<const double> u);

}  // namespace robin
