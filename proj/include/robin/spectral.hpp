#pragma once

#include <span>
#include <vector>

#include "robin/discretization.hpp"
#include "robin/nonlinearity.hpp"
#include "robin/solvers.hpp"

namespace robin {

struct StabilityIndex {
  double mu1 = 0.0;
  std::vector<double> eigenvector;  // positive, normalized to int phi^2 = 1
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // |B phi - mu1 phi|_sup
};

// Linearized operator B = A_bc - diag(V) with V_i = lambda f'(u_i) (lambda taken
// from the profile). For Dirichlet the pinned boundary node is eliminated.
Tridiagonal linearized_operator(const Grid& grid, const BoundaryCondition& bc, std::span<const double> potential);

// Diagonal weights making W B symmetric (computed from the off-diagonal ratios).
std::vector<double> symmetrizing_weights(const Tridiagonal& B);

// First eigenvalue of B by shifted inverse power iteration.
StabilityIndex mu1(const Nonlinearity& nl, const SolutionProfile& u, const Grid& grid, const BoundaryCondition& bc);
StabilityIndex mu1_for_potential(const Grid& grid, const BoundaryCondition& bc, std::span<const double> potential);

// <phi, B phi>_W / <phi, phi>_W with the symmetrizing weights; phi holds one
// value per grid node (the Dirichlet boundary entry is ignored).
double rayleigh_quotient(const Grid& grid, const BoundaryCondition& bc, std::span<const double> potential,
                         std::span<const double> phi);

inline int stability_sign(double mu) { return mu > 0.0 ? 1 : (mu < 0.0 ? -1 : 0); }

}  // namespace robin
