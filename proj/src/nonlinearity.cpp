#include "robin/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robin/error.hpp"

namespace robin {

namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

// Golden-section search for a minimum of g on [a, b].
template <class G>
std::pair<double, double> golden_min(G&& g, double a, double b, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return gc <= gd ? std::make_pair(c, gc) : std::make_pair(d, gd);
}

// Minimum of g over [lo, hi] by a uniform scan of `points` nodes, refined by
// golden section in the bracket around the best node.
template <class G>
std::pair<double, double> scan_min(G&& g, double lo, double hi, int points) {
  const double step = (hi - lo) / (points - 1);
  int best = 0;
  double best_value = g(lo);
  for (int k = 1; k < points; ++k) {
    const double v = g(lo + k * step);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  const double a = lo + std::max(best - 1, 0) * step;
  const double b = lo + std::min(best + 1, points - 1) * step;
  auto [s, v] = golden_min(g, a, b);
  if (v < best_value) return {s, v};
  return {lo + best * step, best_value};
}

}  // namespace

std::vector<double> Nonlinearity::breakpoints() const {
  if (!truncated_) return {};
  return {alpha_, beta_};
}

void Nonlinearity::certify_shift() {
  const double lo = domain_floor_;
  const double hi = beta_;
  const double step = (hi - lo) / (kSamples - 1);
  double min_slope = 0.0;
  for (int k = 0; k < kSamples; ++k) min_slope = std::min(min_slope, derivative(lo + k * step));
  shift_ = kShiftSafety * std::max(0.0, -min_slope);

  double prev = (*this)(lo) + shift_ * lo;
  for (int k = 1; k < kSamples; ++k) {
    const double s = lo + k * step;
    const double cur = (*this)(s) + shift_ * s;
    if (cur - prev < -1e-9) {
      throw Error(ErrorCode::ShiftCertificationFailed,
                  "f(s) + M s decreases near s=" + fmt(s) + " with M=" + fmt(shift_));
    }
    prev = cur;
  }
}

Nonlinearity make_nonlinearity(const Expr& f, double alpha, double beta, double domain_floor) {
  if (!(alpha > 0.0) || !(beta > alpha))
    throw Error(ErrorCode::InvalidArgument, "need 0 < alpha < beta");
  if (!(domain_floor <= alpha)) throw Error(ErrorCode::InvalidArgument, "domain_floor must not exceed alpha");

  Nonlinearity nl;
  nl.f_ = f;
  nl.fprime_ = f.derivative();
  nl.f_prog_ = Program(nl.f_);
  nl.fprime_prog_ = Program(nl.fprime_);
  nl.alpha_ = alpha;
  nl.beta_ = beta;
  nl.domain_floor_ = domain_floor;

  for (double z : {alpha, beta}) {
    const double v = nl.f_prog_(z);
    if (std::fabs(v) > Nonlinearity::kZeroTolerance)
      throw Error(ErrorCode::ZeroCertificationFailed, "f(" + fmt(z) + ") = " + fmt(v) + " is not a zero");
  }
  const double step = (beta - alpha) / (Nonlinearity::kSamples + 1);
  for (int k = 1; k <= Nonlinearity::kSamples; ++k) {
    const double s = alpha + k * step;
    if (!(nl.f_prog_(s) > 0.0))
      throw Error(ErrorCode::PositivityFailed, "f is not positive at s=" + fmt(s));
  }
  nl.certify_shift();
  return nl;
}

Nonlinearity truncate(const Nonlinearity& nl) {
  if (nl.truncated_) return nl;
  Nonlinearity out = nl;
  out.truncated_ = true;
  out.certify_shift();
  return out;
}

double integrate_simpson(const std::function<double(double)>& g, double a, double b,
                         const std::vector<double>& breaks) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_simpson(g, b, a, breaks);

  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  constexpr int kMaxHalvings = 24;
  constexpr int kMinHalvings = 3;
  double total = 0.0;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double lo = cuts[piece];
    const double hi = cuts[piece + 1];
    // n subintervals; `ends`, `odd`, `even` are the Simpson weight classes.
    long n = 2;
    double h = (hi - lo) / n;
    const double ends = g(lo) + g(hi);
    double even = 0.0;
    double odd = g(lo + h);
    double prev = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    bool converged = false;
    for (int halving = 1; halving <= kMaxHalvings; ++halving) {
      even += odd;
      n *= 2;
      h = (hi - lo) / n;
      odd = 0.0;
      for (long i = 1; i < n; i += 2) odd += g(lo + i * h);
      const double cur = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
      const double diff = std::fabs(cur - prev);
      prev = cur;
      if (halving >= kMinHalvings && (diff < 1e-10 || diff < 1e-8 * std::fabs(cur))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw Error(ErrorCode::QuadratureNonconvergence,
                  "Simpson quadrature did not settle on [" + fmt(lo) + ", " + fmt(hi) + "]");
    total += prev;
  }
  return total;
}

double antiderivative(const Nonlinearity& nl, double a, double b) {
  return integrate_simpson([&nl](double s) { return nl(s); }, a, b, nl.breakpoints());
}

AreaReport area_condition(const Nonlinearity& nl) {
  constexpr int kScan = 2001;
  const double alpha = nl.alpha();
  const double beta = nl.beta();
  AreaReport report;

  // f > 0 on (alpha, beta), so int_s^beta f can only fail for s in [0, alpha];
  // the worst point is reported from that window.
  auto tail = [&](double s) { return antiderivative(nl, s, beta); };
  auto [worst_s, worst_value] = scan_min(tail, 0.0, alpha, kScan);
  report.worst_s = worst_s;
  report.worst_value = worst_value;
  report.holds = worst_value > 0.0;
  if (!report.holds) return report;

  // Likewise the constraint for s in (alpha, r) is automatic and the binding part is s in [0, alpha]: int_alpha^r f > -min_s int_s^alpha f.
  auto head = [&](double s) { return antiderivative(nl, s, alpha); };
  const double head_min = std::min(0.0, scan_min(head, 0.0, alpha, kScan).second);
  auto margin = [&](double r) { return antiderivative(nl, alpha, r) + head_min; };

  constexpr double kTol = 1e-6;
  if (!(margin(beta - kTol) > 0.0)) {
    report.r_alpha = beta;
    report.degenerate = true;
    return report;
  }
  double lo = alpha;
  double hi = beta - kTol;
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  report.r_alpha = 0.5 * (lo + hi);
  return report;
}

}  // namespace robin
