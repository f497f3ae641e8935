#include "robin/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "robin/error.hpp"
#include "robin/shooting.hpp"

namespace robin {

namespace {

RadialIvp shifted_ivp(const Nonlinearity& ft, double lambda, int dim, double radius, double epsilon, int steps) {
  const double offset = ft.beta() - epsilon;
  RadialIvp ivp;
  ivp.g = [&ft, offset](double s) { return ft(s + offset); };
  ivp.lambda = lambda;
  ivp.dim = dim;
  ivp.radius = radius;
  ivp.steps = steps;
  ivp.lower_bound = -0.1;
  ivp.upper_bound = epsilon + 0.1;
  return ivp;
}

}  // namespace

std::vector<SolutionProfile> shifted_dirichlet_solutions(const Nonlinearity& nl, double lambda,
                                                         const RadialDomain& domain, double epsilon, int steps) {
  domain.validate();
  if (!(epsilon > 0.0 && epsilon < nl.beta())) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, beta)");
  const Nonlinearity ft = truncate(nl);
  const auto ivp = shifted_ivp(ft, lambda, domain.dim, domain.radius, epsilon, steps);
  const auto dirichlet = BoundaryCondition::dirichlet();
  auto mismatch = [&](double s0) { return boundary_mismatch(integrate_radial(ivp, s0, false), dirichlet); };

  // For large lambda the root sits within exp(-c sqrt(lambda)) of epsilon,
  // below the resolution of a uniform scan. A second scan in
  // t = -log10(1 - s0/epsilon) resolves that end down to rounding.
  std::vector<double> starts = shooting_roots(mismatch, 0.0, epsilon, 2000);
  auto from_t = [epsilon](double t) { return epsilon * (1.0 - std::pow(10.0, -t)); };
  for (double t : shooting_roots([&](double t) { return mismatch(from_t(t)); }, 3.0, 15.5, 500)) {
    const double s0 = from_t(t);
    if (std::none_of(starts.begin(), starts.end(), [s0](double s) { return std::fabs(s - s0) < 1e-12; }))
      starts.push_back(s0);
  }

  std::vector<SolutionProfile> out;
  for (double s0 : starts) {
    if (s0 <= 0.0) continue;  // v = 0 is a solution only when g(0) = 0
    Shot shot = integrate_radial(ivp, s0, true);
    if (shot.escaped) continue;
    // Nonnegativity is checked inside the ball; u(R1) is only zero up to the
    // bisection tolerance and is judged by the residual instead.
    if (*std::min_element(shot.u.begin(), shot.u.end() - 1) < -1e-8 || std::fabs(shot.end_value) > 1e-6) continue;
    SolutionProfile p;
    p.r = std::move(shot.r);
    p.values = std::move(shot.u);
    p.slopes = std::move(shot.du);
    p.lambda = lambda;
    p.source = Source::Shooting;
    p.sup_norm = std::max(std::fabs(shot.min_value), std::fabs(shot.max_value));
    p.min_value = shot.min_value;
    p.center_value = s0;
    p.boundary_value = shot.end_value;
    p.boundary_slope = shot.end_slope;
    p.residual = std::fabs(shot.end_value);
    p.converged = p.residual <= 1e-6;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const SolutionProfile& a, const SolutionProfile& b) { return a.sup_norm < b.sup_norm; });
  return out;
}

double pohozaev_h(const Nonlinearity& nl, double epsilon, int dim, double s) {
  const Nonlinearity ft = truncate(nl);
  const double offset = ft.beta() - epsilon;
  const double G = antiderivative(ft, offset, s + offset);
  const double g = ft(s + offset);
  return dim * G - 0.5 * (dim - 2) * s * g;
}

PohozaevReport pohozaev_check(const Nonlinearity& nl, double lambda, const RadialDomain& domain,
                              const SolutionProfile& v, double epsilon) {
  if (std::fabs(v.boundary_value) > 1e-6)
    throw Error(ErrorCode::NotDirichlet, "profile has u(R) = " + std::to_string(v.boundary_value));
  const Nonlinearity ft = truncate(nl);
  const double offset = ft.beta() - epsilon;
  const int N = domain.dim;

  // G along the trajectory by accumulating the primitive between consecutive values.
  const std::size_t n = v.values.size();
  std::vector<double> integrand(n);
  double G = antiderivative(ft, offset, v.values[0] + offset);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) G += antiderivative(ft, v.values[i - 1] + offset, v.values[i] + offset);
    const double s = v.values[i];
    const double h = N * G - 0.5 * (N - 2) * s * ft(s + offset);
    integrand[i] = std::pow(v.r[i], N - 1) * h;
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < n; ++i) integral += 0.5 * (v.r[i] - v.r[i - 1]) * (integrand[i] + integrand[i - 1]);

  PohozaevReport rep;
  rep.lhs = v.boundary_slope * v.boundary_slope;
  rep.rhs = 2.0 * std::pow(domain.radius, -N) * lambda * integral;
  rep.rel_error = std::fabs(rep.lhs - rep.rhs) / std::max(std::fabs(rep.lhs), 1e-14);
  return rep;
}

double SubsolutionProfile::extension(double r) const {
  if (kind == ExtensionKind::Logarithmic) return level + (std::log(r) - std::log(R1)) * R1 * slope_R1;
  const double p = 2.0 - dim;
  return level + (std::pow(r, p) - std::pow(R1, p)) * std::pow(R1, dim - 1) / p * slope_R1;
}

double SubsolutionProfile::value(double r) const {
  if (r >= R2) return tail_value;
  if (r >= R1) return extension(r);
  const auto it = std::upper_bound(inner_r.begin(), inner_r.end(), r);
  if (it == inner_r.end()) return inner_w.back();
  const std::size_t j = static_cast<std::size_t>(it - inner_r.begin());
  if (j == 0) return inner_w.front();
  const double t = (r - inner_r[j - 1]) / (inner_r[j] - inner_r[j - 1]);
  return (1.0 - t) * inner_w[j - 1] + t * inner_w[j];
}

SubsolutionProfile build_subsolution(const Nonlinearity& nl, double lambda, double epsilon, double R1, double R2,
                                     int dim, int extension_samples) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "subsolution extension needs N >= 2");
  if (!(R1 > 0.0 && R2 > R1)) throw Error(ErrorCode::InvalidArgument, "need 0 < R1 < R2");
  if (extension_samples < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 extension samples");
  const auto inner = shifted_dirichlet_solutions(nl, lambda, RadialDomain{dim, R1}, epsilon);
  if (inner.empty())
    throw Error(ErrorCode::NoInnerSolution, "no inner Dirichlet solution for lambda=" + std::to_string(lambda) +
                                                ", eps=" + std::to_string(epsilon) + ", R1=" + std::to_string(R1));
  const SolutionProfile& v = inner.back();  // the largest one

  SubsolutionProfile sp;
  sp.dim = dim;
  sp.R1 = R1;
  sp.R2 = R2;
  sp.epsilon = epsilon;
  sp.level = nl.beta() - epsilon;
  sp.kind = dim == 2 ? ExtensionKind::Logarithmic : ExtensionKind::Power;
  sp.slope_R1 = v.boundary_slope;
  sp.inner_r = v.r;
  sp.inner_w.resize(v.values.size());
  for (std::size_t i = 0; i < v.values.size(); ++i) sp.inner_w[i] = v.values[i] + sp.level;

  sp.ext_r.resize(extension_samples);
  sp.ext_w.resize(extension_samples);
  const double h = (R2 - R1) / (extension_samples - 1);
  for (int i = 0; i < extension_samples; ++i) {
    sp.ext_r[i] = i + 1 == extension_samples ? R2 : R1 + i * h;
    sp.ext_w[i] = sp.extension(sp.ext_r[i]);
  }
  sp.tail_value = sp.ext_w.back();
  return sp;
}

double extension_laplacian_sup(const SubsolutionProfile& sp) {
  double worst = 0.0;
  const std::size_t n = sp.ext_r.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = sp.ext_r[i] - sp.ext_r[i - 1];
    const double hp = sp.ext_r[i + 1] - sp.ext_r[i];
    const double d2 = 2.0 * ((sp.ext_w[i + 1] - sp.ext_w[i]) / hp - (sp.ext_w[i] - sp.ext_w[i - 1]) / hm) / (hp + hm);
    const double d1 = (sp.ext_w[i + 1] - sp.ext_w[i - 1]) / (hp + hm);
    worst = std::max(worst, std::fabs(d2 + (sp.dim - 1) / sp.ext_r[i] * d1));
  }
  return worst;
}

bool robin_subsolution_slope_test(const SubsolutionProfile& profile, double gamma) {
  const double lhs =
      0.5 * std::pow(profile.R1 / profile.R2, profile.dim - 1) * profile.slope_R1 + gamma * profile.level;
  return lhs < 0.0;
}

bool comparison_check(const std::vector<std::vector<double>>& sequence) {
  for (std::size_t k = 1; k < sequence.size(); ++k) {
    const auto& a = sequence[k - 1];
    const auto& b = sequence[k];
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "iterates differ in length");
    for (std::size_t i = 0; i < a.size(); ++i)
      if (b[i] > a[i] + 1e-9) return false;
  }
  return true;
}

double neumann_compatibility(const Nonlinearity& nl, std::span<const double> u, const Grid& grid) {
  const Nonlinearity ft = truncate(nl);
  std::vector<double> fv(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) fv[i] = ft(u[i]);
  return integrate(grid, fv);
}

}  // namespace robin
