#include "pkdyn/region.hpp"

#include <algorithm>
#include <cmath>

#include "pkdyn/error.hpp"

namespace pkdyn {

TrapRegion TrapRegion::gauge(int k, double rho, int split) {
  TrapRegion r;
  r.variant = Variant::Gauge;
  r.k = k;
  r.rho = rho;
  r.split = split;
  return r;
}

TrapRegion TrapRegion::ball_union(std::vector<Ball> balls) {
  TrapRegion r;
  r.variant = Variant::BallUnion;
  if (balls.empty()) throw Error("TrapRegion: empty ball union");
  r.k = balls.front().center.k();
  for (const auto& b : balls) {
    if (!(b.radius > 0.0 && b.radius < kPi / 2))
      throw Error("TrapRegion: ball radius outside (0, pi/2)");
  }
  r.balls = std::move(balls);
  return r;
}

double TrapRegion::gauge_value(const ProjPoint& x) const {
  double base = 0.0, fiber = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double m = std::abs(x.coords[i]);
    if (i <= split)
      base = std::max(base, m);
    else
      fiber = std::max(fiber, m);
  }
  if (base == 0.0) return std::numeric_limits<double>::infinity();
  return fiber / base;
}

bool TrapRegion::contains(const ProjPoint& x) const {
  if (variant == Variant::Gauge) return gauge_value(x) <= rho;
  for (const auto& b : balls)
    if (fs_distance(x, b.center) <= b.radius) return true;
  return false;
}

double TrapRegion::signed_depth(const ProjPoint& x) const {
  if (variant == Variant::BallUnion) {
    double best = -kPi;
    for (const auto& b : balls)
      best = std::max(best, b.radius - fs_distance(x, b.center));
    return best;
  }
  // Fiber scaling path: scale the fiber block until the gauge equals rho and
  // measure the Fubini-Study angle difference in the (base, fiber) plane.
  double base2 = 0.0, fiber2 = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double m2 = std::norm(x.coords[i]);
    if (i <= split)
      base2 += m2;
    else
      fiber2 += m2;
  }
  const double phi = gauge_value(x);
  if (std::isinf(phi)) return -kPi / 2;
  const double bn = std::sqrt(base2), fn = std::sqrt(fiber2);
  if (fn == 0.0) return std::atan(rho * bn / std::max(bn, 1e-300));
  const double t_star = rho / phi;  // fiber scale reaching the boundary
  const double a_now = std::atan(fn / bn);
  const double a_bdy = std::atan(t_star * fn / bn);
  return a_bdy - a_now;  // positive inside (t_star > 1), negative outside
}

ProjPoint TrapRegion::sample_boundary(RngStream& rng) const {
  if (variant == Variant::Gauge) {
    CVec v(k + 1);
    double base_max = 0.0;
    for (int i = 0; i <= split; ++i) {
      v[i] = rng.normal_complex();
      base_max = std::max(base_max, std::abs(v[i]));
    }
    if (base_max == 0.0) v[0] = 1.0, base_max = 1.0;
    double fiber_max = 0.0;
    for (int i = split + 1; i <= k; ++i) {
      v[i] = rng.normal_complex();
      fiber_max = std::max(fiber_max, std::abs(v[i]));
    }
    if (fiber_max == 0.0) {
      v[k] = 1.0;
      fiber_max = 1.0;
    }
    const double scale = rho * base_max / fiber_max;
    for (int i = split + 1; i <= k; ++i) v[i] *= scale;
    return normalize_point(v);
  }
  // Pick a ball, sample its sphere, reject interior-of-other-ball points.
  for (int attempt = 0; attempt < 256; ++attempt) {
    const auto& b = balls[rng.index(balls.size())];
    CMat frame = tangent_frame(b.center);
    CVec w = CVec::Zero(k + 1);
    for (Eigen::Index j = 0; j < frame.cols(); ++j)
      w += rng.normal_complex() * frame.col(j);
    const double wn = w.norm();
    if (wn < 1e-12) continue;
    w /= wn;
    CVec v = std::cos(b.radius) * b.center.coords + std::sin(b.radius) * w;
    ProjPoint p = normalize_point(v);
    bool interior_elsewhere = false;
    for (const auto& other : balls) {
      if (&other == &b) continue;
      if (fs_distance(p, other.center) < other.radius * (1.0 - 1e-9)) {
        interior_elsewhere = true;
        break;
      }
    }
    if (!interior_elsewhere) return p;
  }
  // Fully overlapped shells; fall back to any sphere point.
  RngStream r2 = rng.split(1);
  const auto& b = balls[0];
  CMat frame = tangent_frame(b.center);
  CVec w = frame.col(0);
  return normalize_point(std::cos(b.radius) * b.center.coords +
                         std::sin(b.radius) * w);
}

ProjPoint TrapRegion::sample_interior(RngStream& rng) const {
  if (variant == Variant::Gauge) {
    CVec v(k + 1);
    double base_max = 0.0;
    for (int i = 0; i <= split; ++i) {
      v[i] = rng.normal_complex();
      base_max = std::max(base_max, std::abs(v[i]));
    }
    if (base_max == 0.0) v[0] = 1.0, base_max = 1.0;
    double fiber_max = 0.0;
    for (int i = split + 1; i <= k; ++i) {
      v[i] = rng.normal_complex();
      fiber_max = std::max(fiber_max, std::abs(v[i]));
    }
    const double target = rho * rng.uniform() * base_max;
    if (fiber_max > 0.0) {
      for (int i = split + 1; i <= k; ++i) v[i] *= target / fiber_max;
    }
    return normalize_point(v);
  }
  const auto& b = balls[rng.index(balls.size())];
  CMat frame = tangent_frame(b.center);
  CVec w = CVec::Zero(k + 1);
  for (Eigen::Index j = 0; j < frame.cols(); ++j)
    w += rng.normal_complex() * frame.col(j);
  const double wn = w.norm();
  const double t = b.radius * std::sqrt(rng.uniform());
  if (wn < 1e-12) return b.center;
  w /= wn;
  return normalize_point(std::cos(t) * b.center.coords + std::sin(t) * w);
}

}  // namespace pkdyn
