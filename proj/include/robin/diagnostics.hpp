#pragma once

#include <span>
#include <string>
#include <vector>

#include "robin/discretization.hpp"
#include "robin/nonlinearity.hpp"
#include "robin/solvers.hpp"

namespace robin {

// Radial Dirichlet solutions of -Delta v = lambda g(v) on B_R with
// g(s) = f~(s + beta - eps), found by shooting over v(0) in (0, eps).
std::vector<SolutionProfile> shifted_dirichlet_solutions(const Nonlinearity& nl, double lambda,
                                                         const RadialDomain& domain, double epsilon,
                                                         int steps = 4096);

struct PohozaevReport {
  double lhs = 0.0;  // v'(R)^2
  double rhs = 0.0;  // 2 R^-N lambda int_0^R r^{N-1} h(v) dr
  double rel_error = 0.0;
};

// h(s) = N G(s) - (N-2)/2 s g(s), G the primitive of g from 0.
double pohozaev_h(const Nonlinearity& nl, double epsilon, int dim, double s);

PohozaevReport pohozaev_check(const Nonlinearity& nl, double lambda, const RadialDomain& domain,
                              const SolutionProfile& v, double epsilon);

enum class ExtensionKind { Logarithmic, Power };

// Inner solution w on [0, R1] with w(R1) = beta - eps, continued by the radial
// harmonic function with matching slope on [R1, R2] and held constant beyond.
struct SubsolutionProfile {
  int dim = 2;
  double R1 = 0.0;
  double R2 = 0.0;
  double epsilon = 0.0;
  double level = 0.0;  // beta - eps
  ExtensionKind kind = ExtensionKind::Logarithmic;
  double slope_R1 = 0.0;
  double tail_value = 0.0;
  std::vector<double> inner_r, inner_w;
  std::vector<double> ext_r, ext_w;

  double value(double r) const;
  // Closed form of the extension at radius r in [R1, R2].
  double extension(double r) const;
};

SubsolutionProfile build_subsolution(const Nonlinearity& nl, double lambda, double epsilon, double R1, double R2,
                                     int dim, int extension_samples = 4097);

// Discrete radial Laplacian of the sampled extension on interior samples.
double extension_laplacian_sup(const SubsolutionProfile& profile);

bool robin_subsolution_slope_test(const SubsolutionProfile& profile, double gamma);

// True iff every consecutive pair is ordered u^{k+1} <= u^k + 1e-9 pointwise.
bool comparison_check(const std::vector<std::vector<double>>& sequence);

double neumann_compatibility(const Nonlinearity& nl, std::span<const double> u, const Grid& grid);

}  // namespace robin
