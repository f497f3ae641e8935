#include "robin/continuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "robin/error.hpp"
#include "robin/spectral.hpp"

namespace robin {

int sweep_threads(int requested, std::size_t jobs) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("ROBIN_BIFURCATE_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = std::min(n, cap);
    }
  }
  n = std::min<long long>(n, static_cast<long long>(jobs));
  return std::max(n, 1);
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
// writes only its own slot, so the result order is fixed.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

BoundaryCondition bc_for_gamma(double gamma) {
  if (gamma == 0.0) return BoundaryCondition::neumann();
  if (std::isinf(gamma) && gamma > 0) return BoundaryCondition::dirichlet();
  return BoundaryCondition::robin(gamma);
}

void require_positive_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " grid is empty");
  for (double v : grid)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " values must be positive");
}

}  // namespace

BranchPoint solve_point(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                        double lambda, const ContinuationSettings& settings) {
  return solve_point(nl, domain, bc, lambda, settings, nullptr);
}

BranchPoint solve_point(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                        double lambda, const ContinuationSettings& settings,
                        std::vector<SolutionProfile>* profiles_out) {
  const Grid grid(domain, settings.grid_n);
  const Nonlinearity ft = truncate(nl);
  const double alpha = nl.alpha(), beta = nl.beta();
  BranchPoint point;
  point.param = lambda;
  std::vector<SolutionProfile> found;
  std::vector<std::string> problems;

  try {
    auto m = monotone_iterate(ft, lambda, grid, bc);
    point.maximal_sup = m.sup_norm;
    point.maximal_min = m.min_value;
    // The truncated limit solves the original problem only where f~ = f.
    const bool trivial = m.sup_norm < 1e-6 && nl.raw(0.0) == 0.0;
    if (m.min_value >= alpha || trivial) found.push_back(std::move(m));
  } catch (const Error& e) {
    problems.emplace_back("monotone: " + std::string(e.what()));
  }

  try {
    for (auto& shot : find_radial_solutions(nl, lambda, domain, bc, settings.shooting)) {
      const auto guess = shot.on_grid(grid);
      SolutionProfile p;
      try {
        p = newton_refine(nl, lambda, grid, bc, guess);
        if (sup_distance(p.values, guess) > 1e-3) p = make_grid_profile(nl, lambda, grid, bc, guess, Source::Shooting);
      } catch (const Error&) {
        p = make_grid_profile(nl, lambda, grid, bc, guess, Source::Shooting);
      }
      p.source = Source::Shooting;
      if (!p.nonnegative()) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const SolutionProfile& q) {
        return sup_distance(q.values, p.values) < 1e-6;
      });
      if (!duplicate) found.push_back(std::move(p));
    }
  } catch (const Error& e) {
    problems.emplace_back("shooting: " + std::string(e.what()));
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const SolutionProfile& a, const SolutionProfile& b) { return a.sup_norm < b.sup_norm; });
  for (const auto& p : found) {
    SolutionSummary s;
    s.sup_norm = p.sup_norm;
    s.center_value = p.center_value;
    s.min_value = p.min_value;
    s.boundary_value = p.boundary_value;
    s.source = p.source;
    s.in_order_interval = p.in_order_interval(alpha, beta);
    try {
      const auto idx = mu1(nl, p, grid, bc);
      s.mu1 = idx.mu1;
      s.mu1_sign = stability_sign(idx.mu1);
    } catch (const Error& e) {
      problems.emplace_back("mu1: " + std::string(e.what()));
    }
    if (s.in_order_interval) ++point.count_in_Oab;
    point.solutions.push_back(s);
  }
  for (const auto& msg : problems) point.error += (point.error.empty() ? "" : "; ") + msg;
  if (profiles_out) *profiles_out = std::move(found);
  return point;
}

BranchDiagram sweep_lambda(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc,
                           const std::vector<double>& lambda_grid, const ContinuationSettings& settings) {
  require_positive_grid(lambda_grid, "lambda");
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
    throw Error(ErrorCode::InvalidArgument, "lambda grid must be increasing");
  BranchDiagram d;
  d.mode = SweepMode::Lambda;
  d.points.resize(lambda_grid.size());
  parallel_for(lambda_grid.size(), sweep_threads(settings.threads, lambda_grid.size()),
               [&](std::size_t i) { d.points[i] = solve_point(nl, domain, bc, lambda_grid[i], settings); });
  return d;
}

BranchDiagram sweep_gamma(const Nonlinearity& nl, const RadialDomain& domain, double lambda,
                          const std::vector<double>& gamma_grid, const ContinuationSettings& settings) {
  if (gamma_grid.empty()) throw Error(ErrorCode::InvalidArgument, "gamma grid is empty");
  for (double g : gamma_grid)
    if (!(g >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma values must be nonnegative");
  std::vector<double> order = gamma_grid;
  std::sort(order.begin(), order.end());
  BranchDiagram d;
  d.mode = SweepMode::Gamma;
  d.points.resize(order.size());
  parallel_for(order.size(), sweep_threads(settings.threads, order.size()), [&](std::size_t i) {
    d.points[i] = solve_point(nl, domain, bc_for_gamma(order[i]), lambda, settings);
    d.points[i].param = order[i];
  });
  return d;
}

bool has_solution_in_order_interval(const Nonlinearity& nl, double lambda, const RadialDomain& domain,
                                    const BoundaryCondition& bc, const ShootingOptions& options) {
  ShootingOptions opts = options;
  opts.stop_at_first_in_order_interval = true;
  const auto sols = find_radial_solutions(nl, lambda, domain, bc, opts);
  return std::any_of(sols.begin(), sols.end(),
                     [&](const SolutionProfile& p) { return p.in_order_interval(nl.alpha(), nl.beta()); });
}

namespace {

// Doubling search for the first lambda where `pred` holds, then bisection.
template <class Pred>
double threshold_search(Pred&& pred, double tol, const char* what) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  double hi = 1.0;
  while (!pred(hi)) {
    hi *= 2.0;
    if (hi > kDoublingCap)
      throw Error(ErrorCode::NoUpperBracket,
                  std::string(what) + ": no solution found for lambda up to 2^20");
  }
  double lo = hi / 2.0;
  if (hi == 1.0) {
    lo = tol;
    if (pred(lo)) return lo;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lambda_min(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc, double tol,
                  const ContinuationSettings& settings) {
  return threshold_search(
      [&](double lam) { return has_solution_in_order_interval(nl, lam, domain, bc, settings.shooting); }, tol,
      "lambda_min");
}

bool maximal_stays_above_alpha(const Nonlinearity& nl, double lambda, const Grid& grid,
                               const BoundaryCondition& bc) {
  constexpr int kMaxIterations = 100000;
  const Nonlinearity ft = truncate(nl);
  const double alpha = nl.alpha();
  const double lm = lambda * ft.shift();
  const auto op = radial_laplacian(grid, lm, bc);
  std::vector<double> u(grid.size(), ft.beta()), rhs(grid.size());
  for (int k = 0; k < kMaxIterations; ++k) {
    for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = lambda * ft(u[i]) + lm * u[i];
    auto next = solve_tridiagonal(op, rhs);
    double inc = 0.0, lo = next[0];
    for (std::size_t i = 0; i < u.size(); ++i) {
      inc = std::max(inc, std::fabs(next[i] - u[i]));
      lo = std::min(lo, next[i]);
    }
    u.swap(next);
    // Iterates decrease, so dropping below alpha is final.
    if (lo < alpha) return false;
    if (inc < 1e-12) return true;
  }
  return true;
}

double lambda_mult(const Nonlinearity& nl, const RadialDomain& domain, const BoundaryCondition& bc, double tol,
                   const ContinuationSettings& settings) {
  const Grid grid(domain, settings.grid_n);
  const double result =
      threshold_search([&](double lam) { return maximal_stays_above_alpha(nl, lam, grid, bc); }, tol, "lambda_mult");
  const BranchPoint check = solve_point(nl, domain, bc, 1.05 * result, settings);
  if (check.count_in_Oab < 2) {
    std::string msg = "lambda_mult=" + std::to_string(result) + ": only " + std::to_string(check.count_in_Oab) +
                      " solution(s) in the order interval at 1.05*lambda_mult";
    if (!check.error.empty()) msg += " (" + check.error + ")";
    throw Error(ErrorCode::MultiplicityNotObserved, msg);
  }
  return result;
}

double lambda_infty(const Nonlinearity& nl, const RadialDomain& domain, double tol,
                    const ContinuationSettings& settings) {
  if (!area_condition(nl).holds)
    throw Error(ErrorCode::AreaConditionFails, "area condition fails; no Dirichlet solution in the order interval");
  return lambda_min(nl, domain, BoundaryCondition::dirichlet(), tol, settings);
}

GammaZeroReport gamma_limit_zero(const Nonlinearity& nl, const RadialDomain& domain, double lambda,
                                 const std::vector<double>& gamma_grid, bool assume_no_patterns,
                                 const ContinuationSettings& settings) {
  require_positive_grid(gamma_grid, "gamma");
  for (std::size_t i = 1; i < gamma_grid.size(); ++i)
    if (!(gamma_grid[i] < gamma_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "gamma grid must be decreasing");
  const Grid grid(domain, settings.grid_n);
  const Nonlinearity ft = truncate(nl);
  const double alpha = nl.alpha(), beta = nl.beta();

  GammaZeroReport rep;
  rep.limit_label = assume_no_patterns ? "alpha" : "alpha or pattern";
  std::optional<double> last_good;
  for (double gamma : gamma_grid) {
    const auto bc = BoundaryCondition::robin(gamma);
    auto ubar = monotone_iterate(ft, lambda, grid, bc);
    std::vector<SolutionProfile> profiles;
    solve_point(nl, domain, bc, lambda, settings, &profiles);

    const SolutionProfile* pick = nullptr;
    for (const auto& p : profiles) {
      if (!p.in_order_interval(alpha, beta) || sup_distance(p.values, ubar.values) <= 1e-4) continue;
      if (!pick) {
        pick = &p;
        continue;
      }
      if (rep.second.empty()) {
        if (p.sup_norm > pick->sup_norm) pick = &p;
      } else {
        const double target = rep.second.back().sup_norm;
        if (std::fabs(p.sup_norm - target) < std::fabs(pick->sup_norm - target)) pick = &p;
      }
    }
    if (!pick) {
      std::string msg = "no second solution at gamma=" + std::to_string(gamma);
      if (last_good) msg += " (last good gamma=" + std::to_string(*last_good) + ")";
      throw Error(ErrorCode::BranchLost, msg);
    }

    if (!rep.maximal.empty()) {
      const auto& prev = rep.maximal.back().values;
      for (std::size_t i = 0; i < prev.size(); ++i) {
        const double drop = prev[i] - ubar.values[i];
        rep.maximal_monotone_violation = std::max(rep.maximal_monotone_violation, drop);
      }
      if (rep.maximal_monotone_violation > 1e-8) rep.maximal_monotone = false;
    }
    GammaZeroRow row;
    row.gamma = gamma;
    double dist = 0.0;
    for (double v : ubar.values) dist = std::max(dist, std::fabs(v - beta));
    row.maximal_distance_to_beta = dist;
    row.second_sup = pick->sup_norm;
    row.second_distance_to_alpha = std::fabs(pick->sup_norm - alpha);
    row.second_min = pick->min_value;
    rep.rows.push_back(row);
    rep.second.push_back(*pick);
    rep.maximal.push_back(std::move(ubar));
    last_good = gamma;
  }

  std::vector<double> fv(grid.size());
  const auto& last = rep.second.back().values;
  for (std::size_t i = 0; i < fv.size(); ++i) fv[i] = ft(last[i]);
  rep.compatibility = integrate(grid, fv);
  return rep;
}

GammaInftyReport gamma_limit_infty(const Nonlinearity& nl, const RadialDomain& domain, double lambda,
                                   const std::vector<double>& gamma_grid, const ContinuationSettings& settings) {
  require_positive_grid(gamma_grid, "gamma");
  for (std::size_t i = 1; i < gamma_grid.size(); ++i)
    if (!(gamma_grid[i] > gamma_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "gamma grid must be increasing");
  // The raw f drives the iteration here; without the area condition there is
  // no Dirichlet branch in the order interval to converge to.
  if (!area_condition(nl).holds)
    throw Error(ErrorCode::AreaConditionFails, "area condition fails; the Dirichlet limit has no branch in [alpha, beta]");
  const Grid grid(domain, settings.grid_n);

  GammaInftyReport rep;
  rep.dirichlet = monotone_iterate(nl, lambda, grid, BoundaryCondition::dirichlet());
  rep.dirichlet_sup = rep.dirichlet.sup_norm;
  if (rep.dirichlet.sup_norm <= nl.alpha())
    throw Error(ErrorCode::BranchLost, "Dirichlet maximal solution is below alpha at lambda=" + std::to_string(lambda));

  double prev = std::numeric_limits<double>::infinity();
  for (double gamma : gamma_grid) {
    auto u = monotone_iterate(nl, lambda, grid, BoundaryCondition::robin(gamma));
    GammaInftyRow row;
    row.gamma = gamma;
    row.distance = sup_distance(u.values, rep.dirichlet.values);
    row.boundary_value = u.boundary_value;
    row.sup_norm = u.sup_norm;
    if (row.distance > prev) rep.distance_monotone = false;
    prev = row.distance;
    rep.rows.push_back(row);
    rep.robin.push_back(std::move(u));
  }
  return rep;
}

}  // namespace robin
