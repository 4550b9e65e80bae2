#pragma once

#include <vector>

#include "pkdyn/projgeom.hpp"
#include "pkdyn/rng.hpp"

namespace pkdyn {

// A trapping-region candidate.  Gauge regions are the homogeneous-ratio
// sublevel sets  { max_{i>s} |z_i| <= rho * max_{i<=s} |z_i| }  (membership is
// scale invariant); BallUnion regions are finite unions of Fubini-Study
// balls (membership is a disjunction; overlapping balls are not merged).
struct TrapRegion {
  enum class Variant { Gauge, BallUnion };

  struct Ball {
    ProjPoint center;
    double radius;
  };

  Variant variant = Variant::Gauge;
  int k = 2;
  double rho = 0.2;
  int split = 1;  // coordinates 0..split are "base", split+1..k are "fiber"
  std::vector<Ball> balls;

  static TrapRegion gauge(int k, double rho, int split = 1);
  static TrapRegion ball_union(std::vector<Ball> balls);

  bool contains(const ProjPoint& x) const;

  // Gauge ratio max_{i>s}|z_i| / max_{i<=s}|z_i| (infinity when the base part
  // vanishes).  Only meaningful for the Gauge variant.
  double gauge_value(const ProjPoint& x) const;

  // Signed depth: positive inside (distance-like gap to the boundary),
  // negative outside.  For Gauge regions this is measured along the fiber
  // scaling path, which is exact for the split geometry.
  double signed_depth(const ProjPoint& x) const;

  ProjPoint sample_boundary(RngStream& rng) const;
  ProjPoint sample_interior(RngStream& rng) const;
};

}  // namespace pkdyn
