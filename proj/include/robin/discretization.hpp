#pragma once

#include <span>
#include <string>
#include <vector>

namespace robin {

// Ball B_R(0) in R^N; for N = 1 the interval (-R, R) restricted to even profiles.
struct RadialDomain {
  int dim = 1;
  double radius = 1.0;

  static double unit_ball_volume(int dim);
  double volume() const;
  double boundary_measure() const;
  void validate() const;
};

// du/dnu + gamma u = 0. Neumann is gamma = 0, Dirichlet the formal gamma = inf.
struct BoundaryCondition {
  enum class Kind { Robin, Neumann, Dirichlet };

  Kind kind = Kind::Neumann;
  double gamma = 0.0;

  static BoundaryCondition robin(double gamma);
  static BoundaryCondition neumann() { return {Kind::Neumann, 0.0}; }
  static BoundaryCondition dirichlet() { return {Kind::Dirichlet, 0.0}; }

  bool is_dirichlet() const { return kind == Kind::Dirichlet; }
  // Coefficient used in the ghost-node closure (0 for Neumann).
  double robin_coefficient() const { return kind == Kind::Robin ? gamma : 0.0; }
  std::string describe() const;
};

class Grid {
public:
  static constexpr int kMinNodes = 64;
  static constexpr int kDefaultNodes = 1024;

  Grid(RadialDomain domain, int n = kDefaultNodes);

  const RadialDomain& domain() const { return domain_; }
  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }
  double h() const { return h_; }
  double node(int i) const { return i * h_; }
  const std::vector<double>& nodes() const { return nodes_; }
  // Cell-volume weights: w_i = |B_{r_{i+1/2}}| - |B_{r_{i-1/2}}|, clipped to [0, R].
  // They sum to |Omega| exactly and reduce to the trapezoid rule for N = 1.
  const std::vector<double>& weights() const { return weights_; }

private:
  RadialDomain domain_;
  int n_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Row i holds lower[i] = A(i, i-1), diag[i], upper[i] = A(i, i+1).
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
  std::vector<double> apply(std::span<const double> u) const;
};

// -Delta_radial + c I with a boundary closure at r = R.
class DiscreteOperator {
public:
  DiscreteOperator(Grid grid, Tridiagonal matrix, double c, BoundaryCondition bc)
      : grid_(std::move(grid)), matrix_(std::move(matrix)), c_(c), bc_(bc) {}

  const Grid& grid() const { return grid_; }
  const Tridiagonal& matrix() const { return matrix_; }
  double shift() const { return c_; }
  const BoundaryCondition& bc() const { return bc_; }

  // For Dirichlet the last component is the constraint residual u_n.
  std::vector<double> apply(std::span<const double> u) const { return matrix_.apply(u); }
  // Singular only for Neumann with c = 0.
  bool invertible() const { return !(bc_.kind == BoundaryCondition::Kind::Neumann && c_ == 0.0); }

private:
  Grid grid_;
  Tridiagonal matrix_;
  double c_;
  BoundaryCondition bc_;
};

// Centered differences for -u'' - (N-1)/r u' + c u; at r = 0 the limit
// -2N (u_1 - u_0)/h^2 + c u_0; Robin/Neumann by ghost-node elimination of
// u'(R) + gamma u(R) = 0; Dirichlet pins u_n = 0.
DiscreteOperator radial_laplacian(const Grid& grid, double c, BoundaryCondition bc);

// Thomas algorithm. For Dirichlet operators the boundary datum rhs[n] is
// replaced by 0. Throws SingularOperator on Neumann with c = 0 or a zero pivot.
std::vector<double> solve_tridiagonal(const DiscreteOperator& op, std::span<const double> rhs);
std::vector<double> solve_tridiagonal(const Tridiagonal& matrix, std::span<const double> rhs);

// Gaussian elimination with partial pivoting, for indefinite systems (Newton
// Jacobians) where the Thomas recursion is not safe.
std::vector<double> solve_tridiagonal_pivoted(const Tridiagonal& matrix, std::span<const double> rhs);

// Sum_i w_i values_i. Throws LengthMismatch.
double integrate(const Grid& grid, std::span<const double> values);

double sup_norm(std::span<const double> v);
double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace robin
