#include "robin/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "robin/error.hpp"

namespace robin {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::Monotone: return "monotone";
    case Source::Shooting: return "shooting";
    case Source::Newton: return "newton";
  }
  return "?";
}

namespace {

void fill_summary(SolutionProfile& p) {
  p.sup_norm = sup_norm(p.values);
  p.min_value = *std::min_element(p.values.begin(), p.values.end());
  p.center_value = p.values.front();
  p.boundary_value = p.values.back();
}

// Cubic Hermite on the trajectory; linear when slopes are absent.
double interpolate(const SolutionProfile& p, double r) {
  const auto& rs = p.r;
  if (r <= rs.front()) return p.values.front();
  if (r >= rs.back()) return p.values.back();
  const auto it = std::upper_bound(rs.begin(), rs.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - rs.begin());
  const std::size_t i = j - 1;
  const double h = rs[j] - rs[i];
  const double t = (r - rs[i]) / h;
  if (p.slopes.size() != p.values.size()) return (1.0 - t) * p.values[i] + t * p.values[j];
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p.values[i] + (t3 - 2 * t2 + t) * h * p.slopes[i] +
         (-2 * t3 + 3 * t2) * p.values[j] + (t3 - t2) * h * p.slopes[j];
}

}  // namespace

std::vector<double> SolutionProfile::on_grid(const Grid& grid) const {
  if (r.size() == grid.size() && r.back() == grid.nodes().back()) return values;
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = interpolate(*this, grid.nodes()[i]);
  return out;
}

std::vector<double> discrete_residual(const Nonlinearity& nl, double lambda, const Grid& grid,
                                      const BoundaryCondition& bc, std::span<const double> u) {
  const auto A = radial_laplacian(grid, 0.0, bc);
  auto F = A.apply(u);
  const std::size_t last = F.size() - 1;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (i == last && bc.is_dirichlet()) continue;
    F[i] -= lambda * nl(u[i]);
  }
  return F;
}

SolutionProfile make_grid_profile(const Nonlinearity& nl, double lambda, const Grid& grid,
                                  const BoundaryCondition& bc, std::vector<double> values, Source source) {
  if (values.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "profile length does not match grid");
  SolutionProfile p;
  p.r = grid.nodes();
  p.values = std::move(values);
  p.lambda = lambda;
  p.source = source;
  fill_summary(p);
  p.residual = sup_norm(discrete_residual(nl, lambda, grid, bc, p.values));
  // One-sided second-order slope at R.
  const std::size_t n = p.values.size() - 1;
  p.boundary_slope = (3.0 * p.values[n] - 4.0 * p.values[n - 1] + p.values[n - 2]) / (2.0 * grid.h());
  p.converged = p.residual <= 1e-6;
  return p;
}

std::vector<double> apply_K(const Nonlinearity& nl, double lambda, const Grid& grid, const BoundaryCondition& bc,
                            std::span<const double> w1) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (w1.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "w1 length does not match grid");
  const double lm = lambda * nl.shift();
  const auto op = radial_laplacian(grid, lm, bc);
  std::vector<double> rhs(w1.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = lambda * nl(w1[i]) + lm * w1[i];
  return solve_tridiagonal(op, rhs);
}

MonotoneResult monotone_iterate_traced(const Nonlinearity& nl, double lambda, const Grid& grid,
                                       const BoundaryCondition& bc, const MonotoneOptions& options) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const double lm = lambda * nl.shift();
  const auto op = radial_laplacian(grid, lm, bc);
  const std::size_t size = grid.size();

  MonotoneResult result;
  std::vector<double> u(size, nl.beta()), next, rhs(size);
  if (options.keep_trace) result.trace.push_back(u);
  int k = 0;
  for (; k < options.max_iterations; ++k) {
    for (std::size_t i = 0; i < size; ++i) rhs[i] = lambda * nl(u[i]) + lm * u[i];
    next = solve_tridiagonal(op, rhs);
    double inc = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const double d = next[i] - u[i];
      inc = std::max(inc, std::fabs(d));
      result.max_rise = std::max(result.max_rise, d);
    }
    u.swap(next);
    if (options.keep_trace) result.trace.push_back(u);
    result.last_increment = inc;
    if (inc < 1e-13) break;
    if (inc < options.tolerance &&
        sup_norm(discrete_residual(nl, lambda, grid, bc, u)) <= 1e-7)
      break;
  }
  if (k == options.max_iterations && options.throw_on_limit)
    throw Error(ErrorCode::IterationLimit,
                "monotone iteration hit the iteration limit; last increment " + std::to_string(result.last_increment));
  result.profile = make_grid_profile(nl, lambda, grid, bc, std::move(u), Source::Monotone);
  result.profile.iterations = std::min(k + 1, options.max_iterations);
  return result;
}

SolutionProfile monotone_iterate(const Nonlinearity& nl, double lambda, const Grid& grid,
                                 const BoundaryCondition& bc, const MonotoneOptions& options) {
  MonotoneOptions opts = options;
  opts.keep_trace = false;
  return monotone_iterate_traced(nl, lambda, grid, bc, opts).profile;
}

Mismatch boundary_mismatch(const Shot& shot, const BoundaryCondition& bc) {
  Mismatch m;
  if (shot.escaped) {
    m.sign = shot.escape == ErrorCode::EscapeBelow ? -1 : 1;
    return m;
  }
  m.valid = true;
  switch (bc.kind) {
    case BoundaryCondition::Kind::Robin: m.value = shot.end_slope + bc.gamma * shot.end_value; break;
    case BoundaryCondition::Kind::Neumann: m.value = shot.end_slope; break;
    case BoundaryCondition::Kind::Dirichlet: m.value = shot.end_value; break;
  }
  m.sign = m.value > 0.0 ? 1 : (m.value < 0.0 ? -1 : 0);
  return m;
}

namespace {

RadialIvp make_ivp(const Nonlinearity& nl, double lambda, const RadialDomain& domain, int steps) {
  domain.validate();
  RadialIvp ivp;
  ivp.g = [&nl](double s) { return nl(s); };
  ivp.lambda = lambda;
  ivp.dim = domain.dim;
  ivp.radius = domain.radius;
  ivp.steps = steps;
  ivp.lower_bound = nl.domain_floor() - 0.1;
  ivp.upper_bound = nl.beta() + 0.1;
  return ivp;
}

SolutionProfile profile_from_shot(Shot&& shot, double lambda, const BoundaryCondition& bc) {
  SolutionProfile p;
  p.r = std::move(shot.r);
  p.values = std::move(shot.u);
  p.slopes = std::move(shot.du);
  p.lambda = lambda;
  p.source = Source::Shooting;
  p.sup_norm = std::max(std::fabs(shot.min_value), std::fabs(shot.max_value));
  p.min_value = shot.min_value;
  p.center_value = shot.start;
  p.boundary_value = shot.end_value;
  p.boundary_slope = shot.end_slope;
  Shot probe;
  probe.end_value = p.boundary_value;
  probe.end_slope = p.boundary_slope;
  p.residual = std::fabs(boundary_mismatch(probe, bc).value);
  p.converged = p.residual <= 1e-6;
  return p;
}

}  // namespace

SolutionProfile shoot(const Nonlinearity& nl, double lambda, const RadialDomain& domain, double s0,
                      const BoundaryCondition& bc, int steps) {
  const auto ivp = make_ivp(nl, lambda, domain, steps);
  Shot shot = integrate_radial(ivp, s0, true);
  if (shot.escaped) throw EscapeError(shot.escape, shot.escape_radius);
  return profile_from_shot(std::move(shot), lambda, bc);
}

std::vector<SolutionProfile> find_radial_solutions(const Nonlinearity& nl, double lambda,
                                                   const RadialDomain& domain, const BoundaryCondition& bc,
                                                   const ShootingOptions& options) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const auto ivp = make_ivp(nl, lambda, domain, options.steps);
  const double alpha = nl.alpha(), beta = nl.beta();

  auto mismatch = [&](double s0) { return boundary_mismatch(integrate_radial(ivp, s0, false), bc); };
  std::function<bool(double)> stop;
  if (options.stop_at_first_in_order_interval) {
    stop = [&](double s0) {
      const Shot shot = integrate_radial(ivp, s0, false);
      const double sup = std::max(std::fabs(shot.min_value), std::fabs(shot.max_value));
      return shot.min_value >= -1e-8 && sup > alpha + 1e-6 && sup < beta - 1e-6;
    };
  }
  std::vector<double> starts = shooting_roots(mismatch, 0.0, beta, options.scan_points, stop);
  for (double z : {alpha, beta}) {
    if (std::any_of(starts.begin(), starts.end(), [&](double s) { return std::fabs(s - z) < 1e-8; })) continue;
    const Mismatch m = mismatch(z);
    if (m.valid && m.value == 0.0) starts.push_back(z);
  }

  std::vector<SolutionProfile> out;
  for (double s0 : starts) {
    Shot shot = integrate_radial(ivp, s0, true);
    if (shot.escaped) continue;
    auto p = profile_from_shot(std::move(shot), lambda, bc);
    if (p.nonnegative()) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const SolutionProfile& a, const SolutionProfile& b) { return a.sup_norm < b.sup_norm; });
  return out;
}

namespace {

// Gradient of log m(u) applied to the step, with m = prod 1/(|u - u_j|_sup^2 + shift).
double deflation_factor(std::span<const double> u, const std::vector<std::vector<double>>& known, double shift) {
  double m = 1.0;
  for (const auto& uj : known) {
    const double d = sup_distance(u, uj);
    m /= d * d + shift;
  }
  return m;
}

}  // namespace

SolutionProfile newton_refine(const Nonlinearity& nl, double lambda, const Grid& grid, const BoundaryCondition& bc,
                              std::span<const double> initial, const std::vector<SolutionProfile>& deflation,
                              const NewtonOptions& options) {
  if (initial.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "initial guess length does not match grid");
  const double h2 = grid.h() * grid.h();
  const auto A = radial_laplacian(grid, 0.0, bc);
  const std::size_t size = grid.size();
  const std::size_t last = size - 1;

  std::vector<std::vector<double>> known;
  known.reserve(deflation.size());
  for (const auto& p : deflation) known.push_back(p.on_grid(grid));

  std::vector<double> u(initial.begin(), initial.end());
  auto residual = [&](std::span<const double> v) { return discrete_residual(nl, lambda, grid, bc, v); };
  auto jacobian = [&](std::span<const double> v) {
    Tridiagonal J = A.matrix();
    for (std::size_t i = 0; i < size; ++i) {
      if (i == last && bc.is_dirichlet()) continue;
      J.diag[i] -= lambda * nl.derivative(v[i]);
    }
    return J;
  };
  auto correction = [&](const Tridiagonal& J, const std::vector<double>& F) {
    std::vector<double> rhs(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
    return solve_tridiagonal_pivoted(J, rhs);
  };
  auto rms = [](const std::vector<double>& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss / static_cast<double>(v.size()));
  };
  // Line-search objective: RMS of the scaled residual, multiplied by the
  // deflation factor. The direction stays the plain Newton step; deflation
  // only decides which damped trial points are acceptable.
  auto merit = [&](std::span<const double> v, const std::vector<double>& F) {
    const double base = h2 * rms(F);
    return known.empty() ? base : base * deflation_factor(v, known, options.deflation_shift);
  };

  std::vector<double> F = residual(u);
  int steps = 0;
  for (; steps < options.max_steps; ++steps) {
    if (h2 * sup_norm(F) <= options.tolerance) break;
    const std::vector<double> delta = correction(jacobian(u), F);
    const double phi0 = merit(u, F);
    double t = 1.0;
    std::vector<double> trial(size), Ft;
    bool accepted = false;
    while (t >= std::ldexp(1.0, -30)) {
      for (std::size_t i = 0; i < size; ++i) trial[i] = u[i] + t * delta[i];
      Ft = residual(trial);
      if (merit(trial, Ft) < phi0 || h2 * sup_norm(Ft) <= options.tolerance) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted || t * sup_norm(delta) < 1e-14)
      throw Error(ErrorCode::NewtonStalled,
                  "Newton step fell below 1e-14 with scaled residual " + std::to_string(h2 * sup_norm(F)));
    u.swap(trial);
    F.swap(Ft);
  }
  if (steps == options.max_steps)
    throw Error(ErrorCode::NewtonStalled, "Newton did not converge in " + std::to_string(options.max_steps) + " steps");

  // One undamped polish step at the root, kept only if it helps.
  {
    const std::vector<double> delta = correction(jacobian(u), F);
    std::vector<double> trial(size);
    for (std::size_t i = 0; i < size; ++i) trial[i] = u[i] + delta[i];
    std::vector<double> Ft = residual(trial);
    if (sup_norm(Ft) < sup_norm(F)) u.swap(trial);
  }
  auto p = make_grid_profile(nl, lambda, grid, bc, std::move(u), Source::Newton);
  p.iterations = steps;
  return p;
}

EnergyReport energy(const Nonlinearity& nl, double lambda, double gamma, const Grid& grid, std::span<const double> u) {
  if (u.size() != grid.size()) throw Error(ErrorCode::LengthMismatch, "profile length does not match grid");
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be nonnegative");
  const auto& dom = grid.domain();
  const Nonlinearity ft = truncate(nl);
  const double omega = RadialDomain::unit_ball_volume(dom.dim);

  double dirichlet = 0.0;
  for (int i = 0; i < grid.n(); ++i) {
    const double du = (u[i + 1] - u[i]) / grid.h();
    const double shell = omega * (std::pow(grid.nodes()[i + 1], dom.dim) - std::pow(grid.nodes()[i], dom.dim));
    dirichlet += du * du * shell;
  }
  std::vector<double> F(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) F[i] = antiderivative(ft, 0.0, u[i]);

  EnergyReport rep;
  rep.value = 0.5 * dirichlet + 0.5 * gamma * dom.boundary_measure() * u.back() * u.back() -
              lambda * integrate(grid, F);
  rep.C1 = nl.beta() * nl.beta() * dom.boundary_measure() / 2.0;
  rep.C2 = dom.volume() * antiderivative(ft, 0.0, nl.beta());
  rep.lambda_bar = rep.C1 * gamma / rep.C2;
  return rep;
}

}  // namespace robin
