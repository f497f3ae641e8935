#include "robin/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "robin/error.hpp"

namespace robin {

double RadialDomain::unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double RadialDomain::volume() const { return unit_ball_volume(dim) * std::pow(radius, dim); }

double RadialDomain::boundary_measure() const {
  return dim * unit_ball_volume(dim) * std::pow(radius, dim - 1);
}

void RadialDomain::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
}

BoundaryCondition BoundaryCondition::robin(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "Robin gamma must be finite and positive");
  return {Kind::Robin, gamma};
}

std::string BoundaryCondition::describe() const {
  switch (kind) {
    case Kind::Neumann: return "neumann";
    case Kind::Dirichlet: return "dirichlet";
    case Kind::Robin: {
      std::ostringstream out;
      out.precision(12);
      out << "robin(" << gamma << ")";
      return out.str();
    }
  }
  return "?";
}

Grid::Grid(RadialDomain domain, int n) : domain_(domain), n_(n) {
  domain_.validate();
  if (n < kMinNodes) throw Error(ErrorCode::InvalidArgument, "grid needs at least 64 intervals");
  h_ = domain_.radius / n_;
  nodes_.resize(size());
  weights_.resize(size());
  const double omega = RadialDomain::unit_ball_volume(domain_.dim);
  const double R = domain_.radius;
  for (int i = 0; i <= n_; ++i) nodes_[i] = i == n_ ? R : i * h_;
  for (int i = 0; i <= n_; ++i) {
    const double outer = i == n_ ? R : (i + 0.5) * h_;
    const double inner = i == 0 ? 0.0 : (i - 0.5) * h_;
    weights_[i] = omega * (std::pow(outer, domain_.dim) - std::pow(inner, domain_.dim));
  }
}

std::vector<double> Tridiagonal::apply(std::span<const double> u) const {
  const std::size_t n = size();
  if (u.size() != n) throw Error(ErrorCode::LengthMismatch, "vector length does not match operator");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * u[i];
    if (i > 0) v += lower[i] * u[i - 1];
    if (i + 1 < n) v += upper[i] * u[i + 1];
    out[i] = v;
  }
  return out;
}

DiscreteOperator radial_laplacian(const Grid& grid, double c, BoundaryCondition bc) {
  if (!(c >= 0.0)) throw Error(ErrorCode::InvalidArgument, "shift c must be nonnegative");
  const int n = grid.n();
  const int N = grid.domain().dim;
  const double h = grid.h();
  const double ih2 = 1.0 / (h * h);

  Tridiagonal A;
  A.lower.assign(n + 1, 0.0);
  A.diag.assign(n + 1, 0.0);
  A.upper.assign(n + 1, 0.0);

  A.diag[0] = 2.0 * N * ih2 + c;
  A.upper[0] = -2.0 * N * ih2;
  for (int i = 1; i < n; ++i) {
    const double drift = (N - 1) / (2.0 * grid.node(i) * h);
    A.lower[i] = -(ih2 - drift);
    A.diag[i] = 2.0 * ih2 + c;
    A.upper[i] = -(ih2 + drift);
  }
  if (bc.is_dirichlet()) {
    A.diag[n] = 1.0;
  } else {
    const double R = grid.domain().radius;
    const double drift = (N - 1) / (2.0 * R * h);
    const double lo = -(ih2 - drift);
    const double up = -(ih2 + drift);
    // Ghost node u_{n+1} = u_{n-1} - 2 h gamma u_n.
    A.lower[n] = lo + up;
    A.diag[n] = 2.0 * ih2 + c - 2.0 * h * bc.robin_coefficient() * up;
  }
  return DiscreteOperator(grid, std::move(A), c, bc);
}

std::vector<double> solve_tridiagonal(const Tridiagonal& A, std::span<const double> rhs) {
  const std::size_t n = A.size();
  if (rhs.size() != n) throw Error(ErrorCode::LengthMismatch, "rhs length does not match operator");
  double scale = 0.0;
  for (double d : A.diag) scale = std::max(scale, std::fabs(d));
  const double tiny = 1e-14 * std::max(scale, 1.0);

  std::vector<double> cp(n), x(n);
  double pivot = A.diag[0];
  if (std::fabs(pivot) < tiny) throw Error(ErrorCode::SingularOperator, "zero pivot in row 0");
  cp[0] = A.upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = A.diag[i] - A.lower[i] * cp[i - 1];
    if (std::fabs(pivot) < tiny)
      throw Error(ErrorCode::SingularOperator, "zero pivot in row " + std::to_string(i));
    cp[i] = A.upper[i] / pivot;
    x[i] = (rhs[i] - A.lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

std::vector<double> solve_tridiagonal(const DiscreteOperator& op, std::span<const double> rhs) {
  if (!op.invertible())
    throw Error(ErrorCode::SingularOperator, "Neumann operator without shift has constants in its kernel");
  if (!op.bc().is_dirichlet()) return solve_tridiagonal(op.matrix(), rhs);
  std::vector<double> b(rhs.begin(), rhs.end());
  if (b.size() != op.matrix().size()) throw Error(ErrorCode::LengthMismatch, "rhs length does not match operator");
  b.back() = 0.0;
  return solve_tridiagonal(op.matrix(), b);
}

std::vector<double> solve_tridiagonal_pivoted(const Tridiagonal& A, std::span<const double> rhs) {
  const std::size_t n = A.size();
  if (rhs.size() != n) throw Error(ErrorCode::LengthMismatch, "rhs length does not match operator");
  if (n == 1) {
    if (A.diag[0] == 0.0) throw Error(ErrorCode::SingularOperator, "zero pivot");
    return {rhs[0] / A.diag[0]};
  }
  // dl[i] = A(i+1, i); second superdiagonal du2 appears through row swaps.
  std::vector<double> dl(n - 1), d(A.diag), du(n - 1), du2(n, 0.0), b(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dl[i] = A.lower[i + 1];
    du[i] = A.upper[i];
  }
  double scale = 0.0;
  for (double v : A.diag) scale = std::max(scale, std::fabs(v));
  const double tiny = 1e-14 * std::max(scale, 1.0);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(d[i]) >= std::fabs(dl[i])) {
      if (std::fabs(d[i]) < tiny) throw Error(ErrorCode::SingularOperator, "zero pivot");
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du2[i];
      }
      du[i] = temp;
      const double bt = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bt - fact * b[i + 1];
    }
  }
  if (std::fabs(d[n - 1]) < tiny) throw Error(ErrorCode::SingularOperator, "zero pivot");
  std::vector<double> x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  return x;
}

double integrate(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(grid.size()) + " values, got " +
                                               std::to_string(values.size()));
  double sum = 0.0;
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "vectors differ in length");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace robin
