#include "robin/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "robin/error.hpp"

namespace robin {

Tridiagonal linearized_operator(const Grid& grid, const BoundaryCondition& bc, std::span<const double> potential) {
  if (potential.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "potential length does not match grid");
  Tridiagonal B = radial_laplacian(grid, 0.0, bc).matrix();
  if (bc.is_dirichlet()) {
    B.lower.pop_back();
    B.diag.pop_back();
    B.upper.pop_back();
    B.upper.back() = 0.0;
  }
  for (std::size_t i = 0; i < B.size(); ++i) B.diag[i] -= potential[i];
  return B;
}

std::vector<double> symmetrizing_weights(const Tridiagonal& B) {
  const std::size_t n = B.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t i = n - 1; i-- > 0;) w[i] = w[i + 1] * B.lower[i + 1] / B.upper[i];
  const double top = *std::max_element(w.begin(), w.end());
  for (double& x : w) x /= top;
  return w;
}

namespace {

double weighted_dot(const std::vector<double>& w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

}  // namespace

double rayleigh_quotient(const Grid& grid, const BoundaryCondition& bc, std::span<const double> potential,
                         std::span<const double> phi) {
  if (phi.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "trial vector length does not match grid");
  const Tridiagonal B = linearized_operator(grid, bc, potential);
  const auto w = symmetrizing_weights(B);
  const auto x = phi.first(B.size());
  const auto Bx = B.apply(x);
  const double den = weighted_dot(w, x, x);
  if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "trial vector is zero");
  return weighted_dot(w, x, Bx) / den;
}

StabilityIndex mu1_for_potential(const Grid& grid, const BoundaryCondition& bc, std::span<const double> potential) {
  constexpr int kMaxIterations = 10000;
  Tridiagonal B = linearized_operator(grid, bc, potential);
  const std::size_t n = B.size();
  const auto w = symmetrizing_weights(B);
  double vmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::fabs(potential[i]));
  const double sigma = 1.0 + vmax;
  Tridiagonal shifted = B;
  for (double& d : shifted.diag) d += sigma;

  std::vector<double> x(n, 1.0), y;
  double mu = 0.0, prev = HUGE_VAL, change = HUGE_VAL;
  StabilityIndex out;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    y = solve_tridiagonal(shifted, x);
    const double norm = std::sqrt(weighted_dot(w, y, y));
    if (!(norm > 0.0)) throw Error(ErrorCode::PowerIterationStalled, "inverse iterate vanished");
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = y[i] / norm;
      change = std::max(change, std::fabs(v - x[i]));
      x[i] = v;
    }
    const auto Bx = B.apply(x);
    mu = weighted_dot(w, x, Bx);
    if (std::fabs(mu - prev) < 1e-10 && change < 1e-10) break;
    prev = mu;
  }
  if (it == kMaxIterations)
    throw Error(ErrorCode::PowerIterationStalled, "inverse power iteration did not settle in 10000 iterations");

  // Back to one entry per grid node, normalized in the grid quadrature.
  std::vector<double> phi(grid.size(), 0.0);
  std::copy(x.begin(), x.end(), phi.begin());
  double total = 0.0;
  for (double v : phi) total += v;
  if (total < 0.0)
    for (double& v : phi) v = -v;
  std::vector<double> sq(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) sq[i] = phi[i] * phi[i];
  const double scale = 1.0 / std::sqrt(integrate(grid, sq));
  for (double& v : phi) v *= scale;

  std::span<const double> core(phi.data(), n);
  const auto Bphi = B.apply(core);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::fabs(Bphi[i] - mu * phi[i]));

  const double lo = *std::min_element(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(n));
  out.mu1 = mu;
  out.eigenvector = std::move(phi);
  out.iterations = it + 1;
  out.residual = res;
  out.converged = lo > 0.0;
  return out;
}

StabilityIndex mu1(const Nonlinearity& nl, const SolutionProfile& u, const Grid& grid, const BoundaryCondition& bc) {
  const auto values = u.on_grid(grid);
  std::vector<double> potential(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) potential[i] = u.lambda * nl.derivative(values[i]);
  return mu1_for_potential(grid, bc, potential);
}

}  // namespace robin
