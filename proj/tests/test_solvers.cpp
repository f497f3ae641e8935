#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "robin/error.hpp"
#include "robin/solvers.hpp"

using namespace robin;

namespace {

const Nonlinearity& cubic() {
  static const Nonlinearity nl = make_nonlinearity(parse_expr("s*(s-1)*(3-s)"), 1.0, 3.0, 0.0);
  return nl;
}
const RadialDomain kUnit{1, 1.0};
const auto kRobin1 = BoundaryCondition::robin(1.0);

const std::vector<SolutionProfile>& solutions_at_50() {
  static const auto sols = find_radial_solutions(cubic(), 50.0, kUnit, kRobin1);
  return sols;
}

}  // namespace

TEST_CASE("K fixes beta under Neumann and lowers it under Robin") {
  const Grid grid(kUnit, 512);
  const std::vector<double> beta(grid.size(), 3.0);
  const auto n = apply_K(cubic(), 5.0, grid, BoundaryCondition::neumann(), beta);
  CHECK(sup_distance(n, beta) <= 1e-9);
  const auto r = apply_K(cubic(), 5.0, grid, kRobin1, beta);
  for (double v : r) CHECK(v < 3.0);
  CHECK(r.back() < 3.0);
}

TEST_CASE("shooting solutions are fixed points of K") {
  const Grid grid(kUnit, 1024);
  int checked = 0;
  for (const auto& s : solutions_at_50()) {
    if (!s.in_order_interval(1.0, 3.0)) continue;
    const auto w = s.on_grid(grid);
    CHECK(sup_distance(apply_K(cubic(), 50.0, grid, kRobin1, w), w) <= 1e-5);
    ++checked;
  }
  CHECK(checked >= 2);
}

TEST_CASE("monotone iteration") {
  const Grid grid(kUnit, 1024);
  const auto ft = truncate(cubic());
  SUBCASE("Neumann returns beta") {
    const auto p = monotone_iterate(ft, 4.0, grid, BoundaryCondition::neumann());
    CHECK(std::fabs(p.min_value - 3.0) <= 1e-9);
    CHECK(std::fabs(p.sup_norm - 3.0) <= 1e-9);
  }
  SUBCASE("large lambda stays near beta") {
    const auto p = monotone_iterate(ft, 50.0, grid, kRobin1);
    CHECK(p.sup_norm > 2.9);
    CHECK(p.sup_norm < 3.0);
    CHECK(p.residual <= 1e-6);
    CHECK(p.source == Source::Monotone);
  }
  SUBCASE("small lambda collapses to zero") {
    const auto p = monotone_iterate(ft, 0.01, grid, kRobin1);
    CHECK(p.sup_norm < 1e-6);
  }
  SUBCASE("iterates decrease") {
    MonotoneOptions opt;
    opt.keep_trace = true;
    const auto res = monotone_iterate_traced(ft, 10.0, grid, kRobin1, opt);
    CHECK(res.trace.size() >= 2);
    CHECK(res.max_rise <= 1e-9);
  }
}

TEST_CASE("shooting from equilibria") {
  const auto b = shoot(cubic(), 7.0, kUnit, 3.0, kRobin1);
  CHECK(std::fabs(b.boundary_value - 3.0) <= 1e-12);
  CHECK(std::fabs(b.boundary_slope) <= 1e-12);
  CHECK(b.residual == doctest::Approx(3.0));
  const auto a = shoot(cubic(), 7.0, kUnit, 1.0, BoundaryCondition::robin(2.0));
  CHECK(std::fabs(a.sup_norm - 1.0) <= 1e-12);
  CHECK(a.residual == doctest::Approx(2.0));
}

TEST_CASE("the maximal shot decreases monotonically") {
  const double s0 = solutions_at_50().back().center_value;
  const auto p = shoot(cubic(), 50.0, kUnit, s0, kRobin1);
  for (std::size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] <= p.values[i - 1] + 1e-14);
  CHECK(p.boundary_slope < 0.0);
}

TEST_CASE("shot escaping the band throws") {
  // At lambda = 50 a start at 2.999 overshoots the whole interval and leaves
  // through the lower guard.
  const auto ref = oracle::shoot(oracle::cubic, 50.0, 1, 1.0, 2.999, 16384, -0.1, 3.1);
  REQUIRE(ref.escaped);
  try {
    shoot(cubic(), 50.0, kUnit, 2.999, kRobin1);
    FAIL("no escape");
  } catch (const EscapeError& e) {
    CHECK(e.code() == ErrorCode::EscapeBelow);
    CHECK(std::fabs(e.radius() - ref.r.back()) <= 1e-3);
  }
}

TEST_CASE("radial solution enumeration") {
  SUBCASE("Neumann constants") {
    const auto sols = find_radial_solutions(cubic(), 3.0, kUnit, BoundaryCondition::neumann());
    auto has_constant = [&](double c) {
      return std::any_of(sols.begin(), sols.end(), [c](const SolutionProfile& p) {
        return std::fabs(p.sup_norm - c) < 1e-9 && std::fabs(p.min_value - c) < 1e-9;
      });
    };
    CHECK(has_constant(1.0));
    CHECK(has_constant(3.0));
  }
  SUBCASE("two or more order-interval solutions at lambda = 50") {
    const auto& sols = solutions_at_50();
    const auto inside = std::count_if(sols.begin(), sols.end(),
                                      [](const SolutionProfile& p) { return p.sup_norm > 1.0 && p.sup_norm < 3.0; });
    CHECK(inside >= 2);
    const Grid grid(kUnit, 1024);
    const auto mono = monotone_iterate(truncate(cubic()), 50.0, grid, kRobin1);
    CHECK(sup_distance(sols.back().on_grid(grid), mono.values) <= 1e-4);
  }
  SUBCASE("starting values agree with an independent fine-step shooter") {
    auto phi = [&](double s0) {
      const auto t = oracle::shoot(oracle::cubic, 50.0, 1, 1.0, s0, 16384, -0.1, 3.1);
      if (t.escaped) return t.u.back() < 0.0 ? -1.0 : 1.0;
      return t.du.back() + t.u.back();
    };
    const auto roots = oracle::scan_roots(phi, 1e-3, 3.0 - 1e-3, 4000);
    for (const auto& s : solutions_at_50()) {
      if (!s.in_order_interval(1.0, 3.0)) continue;
      const bool matched = std::any_of(roots.begin(), roots.end(),
                                       [&](double r) { return std::fabs(r - s.center_value) < 1e-6; });
      CHECK_MESSAGE(matched, "u(0) = " << s.center_value);
    }
  }
  SUBCASE("nothing in the window at tiny lambda") {
    const auto sols = find_radial_solutions(cubic(), 0.01, kUnit, kRobin1);
    for (const auto& p : sols) CHECK_FALSE((p.sup_norm > 1.0 && p.sup_norm < 3.0));
  }
}

TEST_CASE("Newton refinement") {
  const Grid grid(kUnit, 1024);
  const double h2 = grid.h() * grid.h();
  SUBCASE("already converged input") {
    const auto mono = monotone_iterate(truncate(cubic()), 50.0, grid, kRobin1);
    const auto p = newton_refine(cubic(), 50.0, grid, kRobin1, mono.values);
    CHECK(p.iterations <= 5);
    CHECK(p.residual * h2 <= 1e-10);
    CHECK(p.source == Source::Newton);
  }
  SUBCASE("deflation finds a second solution") {
    const auto mono = monotone_iterate(truncate(cubic()), 50.0, grid, kRobin1);
    const std::vector<double> mid(grid.size(), 2.0);
    const auto p = newton_refine(cubic(), 50.0, grid, kRobin1, mid, {mono});
    CHECK(sup_distance(p.values, mono.values) > 1e-2);
    double best = 1e300;
    for (const auto& s : solutions_at_50()) best = std::min(best, sup_distance(s.on_grid(grid), p.values));
    CHECK(best <= 1e-4);
  }
  SUBCASE("zero is found from zero") {
    const std::vector<double> zero(grid.size(), 0.0);
    const auto p = newton_refine(cubic(), 50.0, grid, kRobin1, zero);
    CHECK(p.sup_norm <= 1e-12);
  }
}

TEST_CASE("energy functional") {
  const Grid grid(kUnit, 512);
  const std::vector<double> zero(grid.size(), 0.0);
  CHECK(energy(cubic(), 1.0, 1.0, grid, zero).value == doctest::Approx(0.0));
  const std::vector<double> beta(grid.size(), 3.0);
  const auto e = energy(cubic(), 1.0, 1.0, grid, beta);
  CHECK(e.value == doctest::Approx(11.0 / 3.0).epsilon(1e-9));
  CHECK(e.C1 == doctest::Approx(9.0));
  CHECK(e.C2 == doctest::Approx(16.0 / 3.0).epsilon(1e-9));
  CHECK(e.lambda_bar == doctest::Approx(27.0 / 16.0).epsilon(1e-9));
  for (double gamma : {0.3, 1.0, 4.0}) {
    const auto base = energy(cubic(), 1.0, gamma, grid, beta);
    CHECK(energy(cubic(), 1.01 * base.lambda_bar, gamma, grid, beta).value < 0.0);
  }
}
