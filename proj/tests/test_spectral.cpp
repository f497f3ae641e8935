#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "robin/spectral.hpp"

using namespace robin;

namespace {

const Nonlinearity& cubic() {
  static const Nonlinearity nl = make_nonlinearity(parse_expr("s*(s-1)*(3-s)"), 1.0, 3.0, 0.0);
  return nl;
}

SolutionProfile constant_profile(const Grid& grid, const BoundaryCondition& bc, double value, double lambda) {
  return make_grid_profile(cubic(), lambda, grid, bc, std::vector<double>(grid.size(), value), Source::Monotone);
}

// Smallest positive root of k tan k = gamma (first Robin eigenvalue on (-1, 1) is k^2).
double robin_k(double gamma) {
  double lo = 1e-9, hi = std::numbers::pi / 2 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (m * std::tan(m) < gamma ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Neumann constant profiles: mu1 = -lambda f'(c)") {
  const Grid grid({1, 1.0}, 512);
  const auto bc = BoundaryCondition::neumann();
  for (double c : {0.5, 1.0, 2.0, 3.0}) {
    const auto idx = mu1(cubic(), constant_profile(grid, bc, c, 1.0), grid, bc);
    CHECK(std::fabs(idx.mu1 + oracle::cubic_prime(c)) <= 1e-8);
    CHECK(idx.converged);
  }
  const auto at_beta = mu1(cubic(), constant_profile(grid, bc, 3.0, 1.0), grid, bc);
  CHECK(at_beta.mu1 == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("constant potentials shift the spectrum exactly") {
  for (auto bc : {BoundaryCondition::robin(1.0), BoundaryCondition::dirichlet(), BoundaryCondition::neumann()}) {
    for (int dim : {1, 2, 3}) {
      const Grid grid({dim, 1.0}, 256);
      const double base = mu1_for_potential(grid, bc, std::vector<double>(grid.size(), 0.0)).mu1;
      for (double c : {-4.0, 0.7, 12.0}) {
        const double shifted = mu1_for_potential(grid, bc, std::vector<double>(grid.size(), c)).mu1;
        CHECK(std::fabs(shifted - (base - c)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("zero-potential eigenvalues approach the continuum values") {
  const Grid grid({1, 1.0}, 1024);
  const double dir = mu1_for_potential(grid, BoundaryCondition::dirichlet(), std::vector<double>(grid.size(), 0.0)).mu1;
  CHECK(dir == doctest::Approx(std::numbers::pi * std::numbers::pi / 4.0).epsilon(1e-5));
  const double k = robin_k(1.0);
  const double rob = mu1_for_potential(grid, BoundaryCondition::robin(1.0), std::vector<double>(grid.size(), 0.0)).mu1;
  CHECK(rob == doctest::Approx(k * k).epsilon(1e-5));
}

TEST_CASE("Robin mu1 at beta bounds every Rayleigh quotient from below") {
  const Grid grid({1, 1.0}, 512);
  const auto bc = BoundaryCondition::robin(1.0);
  const auto p = constant_profile(grid, bc, 3.0, 1.0);
  const auto idx = mu1(cubic(), p, grid, bc);
  CHECK(idx.mu1 >= 6.0);
  std::vector<double> V(grid.size(), oracle::cubic_prime(3.0));
  std::mt19937 rng(11);
  std::normal_distribution<double> N01;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> phi(grid.size());
    const double a = N01(rng), b = N01(rng), c = N01(rng);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double r = grid.node(int(i));
      phi[i] = 1.0 + a * r * r + b * std::cos(3.0 * r) + c * std::sin(7.0 * r) + 0.05 * N01(rng);
    }
    CHECK(rayleigh_quotient(grid, bc, V, phi) >= idx.mu1 - 1e-7);
  }
  CHECK(rayleigh_quotient(grid, bc, V, idx.eigenvector) == doctest::Approx(idx.mu1).epsilon(1e-8));
}

TEST_CASE("eigenvector is positive and normalised") {
  const Grid grid({2, 1.0}, 400);
  const auto bc = BoundaryCondition::robin(2.0);
  std::vector<double> V(grid.size());
  for (std::size_t i = 0; i < V.size(); ++i) V[i] = 10.0 * std::cos(3.0 * grid.node(int(i)));
  const auto idx = mu1_for_potential(grid, bc, V);
  for (double x : idx.eigenvector) CHECK(x > 0.0);
  std::vector<double> sq(idx.eigenvector.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = idx.eigenvector[i] * idx.eigenvector[i];
  CHECK(integrate(grid, sq) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(idx.residual <= 1e-6);
}

TEST_CASE("symmetrizing weights") {
  const Grid grid({3, 1.0}, 64);
  const auto B = linearized_operator(grid, BoundaryCondition::robin(1.0), std::vector<double>(grid.size(), 0.0));
  const auto w = symmetrizing_weights(B);
  for (std::size_t i = 0; i + 1 < B.size(); ++i)
    CHECK(w[i] * B.upper[i] == doctest::Approx(w[i + 1] * B.lower[i + 1]).epsilon(1e-12));
}

TEST_CASE("stability sign") {
  CHECK(stability_sign(2.0) == 1);
  CHECK(stability_sign(-1e-3) == -1);
  CHECK(stability_sign(0.0) == 0);
}
