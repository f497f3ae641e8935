#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robin/discretization.hpp"
#include "robin/nonlinearity.hpp"
#include "robin/solvers.hpp"

namespace robin {

struct SolutionSummary {
  double sup_norm = 0.0;
  double center_value = 0.0;
  double min_value = 0.0;
  double boundary_value = 0.0;
  int mu1_sign = 0;
  double mu1 = 0.0;
  Source source = Source::Shooting;
  bool in_order_interval = false;
};

struct BranchPoint {
  double param = 0.0;
  std::vector<SolutionSummary> solutions;  // sorted by sup_norm
  int count_in_Oab = 0;
  std::optional<double> maximal_sup;       // sup-norm of the truncated maximal solution
  std::optional<double> maximal_min;
  std::string error;                       // empty when the point succeeded
};

enum class SweepMode { Lambda, Gamma };

struct Thresholds {
  std::optional<double> lambda_min;
  std::optional<double> lambda_mult;
  std::optional<double> lambda_infty;
};

struct BranchDiagram {
  SweepMode mode = SweepMode::Lambda;
  std::vector<BranchPoint> points;
  Thresholds thresholds;
};

struct ContinuationSettings {
  int grid_n = Grid::kDefaultNodes;
  ShootingOptions shooting;
  // 0: use ROBIN_BIFURCATE_THREADS if set, else the hardware concurrency.
  int threads = 0;
};

int sweep_threads(int requested, std::size_t jobs);

// All solutions at one parameter point: shooting roots polished on the grid,
// plus the monotone limit of the truncated problem, deduplicated and with
// stability signs attached.
BranchPoint solve_point(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                        double lambda, const ContinuationSettings& settings = {});
// Same, also returning the full profiles (grid values, sorted by sup-norm).
BranchPoint solve_point(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                        double lambda, const ContinuationSettings& settings,
                        std::vector<SolutionProfile>* profiles);

BranchDiagram sweep_lambda(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                           const std::vector<double>& lambda_grid, const ContinuationSettings& settings = {});

// gamma = 0 maps to Neumann; +inf to Dirichlet.
BranchDiagram sweep_gamma(const Nonlinearity& nl, const RadialDomain& domain, double lambda,
                          const std::vector<double>& gamma_grid, const ContinuationSettings& settings = {});

// Existence predicate: a radial solution with sup-norm inside (alpha, beta).
bool has_solution_in_order_interval(const Nonlinearity& nl, double lambda, const RadialDomain& domain,
                                    const BoundaryCondition& bc, const ShootingOptions& options = {});

inline constexpr double kDoublingCap = 1048576.0;  // 2^20

// Smallest lambda with a solution in the order interval, by doubling then
// bisection to width tol. Throws NoUpperBracket past 2^20.
double lambda_min(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                  double tol = 1e-4, const ContinuationSettings& settings = {});

// Smallest lambda whose truncated maximal solution stays >= alpha everywhere.
// Throws MultiplicityNotObserved when two solutions are not found at 1.05x.
double lambda_mult(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                   double tol = 1e-3, const ContinuationSettings& settings = {});
bool maximal_stays_above_alpha(const Nonlinearity& nl, double lambda, const Grid& grid,
                               const BoundaryCondition& bc);

// Dirichlet lambda_min; throws AreaConditionFails when the area condition fails.
double lambda_infty(const Nonlinearity& nl, const RadialDomain& domain, double tol = 1e-4,
                    const ContinuationSettings& settings = {});

struct GammaZeroRow {
  double gamma = 0.0;
  double maximal_distance_to_beta = 0.0;  // |u_bar - beta|_sup
  double second_sup = 0.0;                // sup-norm of the tracked second solution
  double second_distance_to_alpha = 0.0;  // |sup - alpha|
  double second_min = 0.0;
};

struct GammaZeroReport {
  std::vector<GammaZeroRow> rows;
  bool maximal_monotone = true;   // u_bar pointwise nonincreasing in gamma to 1e-8
  double maximal_monotone_violation = 0.0;
  double compatibility = 0.0;     // int f~(second limit) over Omega
  std::string limit_label;        // "alpha" or "alpha or pattern"
  std::vector<SolutionProfile> maximal;  // per gamma
  std::vector<SolutionProfile> second;   // per gamma
};

// Tracks the maximal and second solutions as gamma decreases. Throws
// BranchLost when no second solution exists at some gamma.
GammaZeroReport gamma_limit_zero(const Nonlinearity& nl, const RadialDomain& domain, double lambda,
                                 const std::vector<double>& gamma_grid, bool assume_no_patterns = true,
                                 const ContinuationSettings& settings = {});

struct GammaInftyRow {
  double gamma = 0.0;
  double distance = 0.0;        // |u_gamma - u_dirichlet|_sup
  double boundary_value = 0.0;  // u_gamma(R)
  double sup_norm = 0.0;
};

struct GammaInftyReport {
  std::vector<GammaInftyRow> rows;
  double dirichlet_sup = 0.0;
  bool distance_monotone = true;
  std::vector<SolutionProfile> robin;  // per gamma
  SolutionProfile dirichlet;
};

GammaInftyReport gamma_limit_infty(const Nonlinearity& nl, const RadialDomain& domain, double lambda,
                                   const std::vector<double>& gamma_grid, const ContinuationSettings& settings = {});

}  // namespace robin
