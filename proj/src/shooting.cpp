#include "robin/shooting.hpp"

#include <algorithm>

namespace robin {

Shot integrate_radial(const RadialIvp& ivp, double s0, bool keep_trajectory) {
  const int steps = ivp.steps;
  const double h = ivp.radius / steps;
  const double lambda = ivp.lambda;
  const double curvature = ivp.dim - 1.0;
  const auto& g = ivp.g;

  // Returns u''; at the origin the regular limit is used.
  auto accel = [&](double r, double u, double v) {
    if (r == 0.0) return -lambda * g(u) / ivp.dim;
    return -curvature / r * v - lambda * g(u);
  };

  Shot shot;
  shot.start = s0;
  double u = s0;
  double v = 0.0;
  shot.min_value = shot.max_value = u;
  if (keep_trajectory) {
    shot.r.reserve(steps + 1);
    shot.u.reserve(steps + 1);
    shot.du.reserve(steps + 1);
    shot.r.push_back(0.0);
    shot.u.push_back(u);
    shot.du.push_back(v);
  }
  for (int i = 0; i < steps; ++i) {
    const double r = i * h;
    const double k1u = v;
    const double k1v = accel(r, u, v);
    const double k2u = v + 0.5 * h * k1v;
    const double k2v = accel(r + 0.5 * h, u + 0.5 * h * k1u, k2u);
    const double k3u = v + 0.5 * h * k2v;
    const double k3v = accel(r + 0.5 * h, u + 0.5 * h * k2u, k3u);
    const double k4u = v + h * k3v;
    const double k4v = accel(r + h, u + h * k3u, k4u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double rn = i + 1 == steps ? ivp.radius : (i + 1) * h;
    shot.min_value = std::min(shot.min_value, u);
    shot.max_value = std::max(shot.max_value, u);
    if (keep_trajectory) {
      shot.r.push_back(rn);
      shot.u.push_back(u);
      shot.du.push_back(v);
    }
    if (u < ivp.lower_bound || u > ivp.upper_bound || !std::isfinite(u)) {
      shot.escaped = true;
      shot.escape = (u > ivp.upper_bound) ? ErrorCode::EscapeAbove : ErrorCode::EscapeBelow;
      shot.escape_radius = rn;
      break;
    }
  }
  shot.end_value = u;
  shot.end_slope = v;
  return shot;
}

namespace {

int sign_of(const Mismatch& m) {
  if (!m.valid) return m.sign;
  return m.value > 0.0 ? 1 : (m.value < 0.0 ? -1 : 0);
}

}  // namespace

std::vector<double> shooting_roots(const std::function<Mismatch(double)>& mismatch, double lo, double hi,
                                   int scan_points, const std::function<bool(double)>& stop) {
  constexpr double kBisectTol = 1e-10;
  constexpr double kDedup = 1e-8;
  std::vector<double> roots;
  bool done = false;
  auto found = [&](double s) {
    roots.push_back(s);
    if (stop && stop(s)) done = true;
  };

  // Interior samples plus both endpoints, so roots in the outermost cells are
  // bracketed too.
  const double step = (hi - lo) / (scan_points + 1);
  double prev_s = 0.0;
  int prev_sign = 0;
  bool prev_valid = false;
  for (int k = 0; k <= scan_points + 1 && !done; ++k) {
    const double s = k == scan_points + 1 ? hi : lo + k * step;
    const Mismatch m = mismatch(s);
    const int sg = sign_of(m);
    if (m.valid && sg == 0) {
      found(s);
    } else if (k > 0 && prev_sign * sg < 0 && (prev_valid || m.valid)) {
      // Bisection on the bracket [a, b] with sign(a) = sa.
      double a = prev_s;
      double b = s;
      int sa = prev_sign;
      Mismatch ma, mb = m;
      bool exact = false;
      while (b - a >= kBisectTol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const Mismatch mm = mismatch(mid);
        const int sm = sign_of(mm);
        if (mm.valid && sm == 0) {
          found(mid);
          exact = true;
          break;
        }
        if (sm == sa) {
          a = mid;
          ma = mm;
        } else {
          b = mid;
          mb = mm;
        }
      }
      if (!exact) {
        if (!ma.valid) ma = mismatch(a);
        if (!mb.valid) mb = mismatch(b);
        // A sign change between escape classes is a separatrix, not a root.
        if (ma.valid && mb.valid) {
          // Illinois regula falsi inside the final bracket to shrink |mismatch|.
          double fa = ma.value, fb = mb.value;
          double best = std::fabs(fa) < std::fabs(fb) ? a : b;
          double best_abs = std::min(std::fabs(fa), std::fabs(fb));
          int side = 0;
          for (int it = 0; it < 100 && best_abs > 0.0; ++it) {
            const double c = (a * fb - b * fa) / (fb - fa);
            if (!(c > a && c < b)) break;
            const Mismatch mc = mismatch(c);
            if (!mc.valid) break;
            if (std::fabs(mc.value) < best_abs) {
              best_abs = std::fabs(mc.value);
              best = c;
            }
            if ((mc.value > 0.0) == (fb > 0.0)) {
              b = c;
              fb = mc.value;
              if (side == -1) fa *= 0.5;
              side = -1;
            } else {
              a = c;
              fa = mc.value;
              if (side == 1) fb *= 0.5;
              side = 1;
            }
          }
          found(best);
        }
      }
    }
    prev_s = s;
    prev_sign = sg;
    prev_valid = m.valid;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || r - unique.back() >= kDedup) unique.push_back(r);
  return unique;
}

}  // namespace robin
