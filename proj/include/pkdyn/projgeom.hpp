#pragma once

#include <optional>
#include <vector>

#include "pkdyn/error.hpp"
#include "pkdyn/rng.hpp"
#include "pkdyn/types.hpp"

namespace pkdyn {

// A point of P^k as a canonical homogeneous representative: unit Euclidean
// norm, and the coordinate of largest modulus is real positive (ties broken
// by lowest index).  Normalization is a total deterministic function, so
// ProjPoint values compare meaningfully coordinate-wise.
struct ProjPoint {
  CVec coords;

  int k() const { return static_cast<int>(coords.size()) - 1; }
};

// Hermitian inner product sum_i a_i * conj(b_i).
Complex herm(const CVec& a, const CVec& b);

ProjPoint normalize_point(const CVec& raw);

// Fubini-Study distance arccos(|<x,y>|), in [0, pi/2].
double fs_distance(const ProjPoint& x, const ProjPoint& y);

ProjPoint random_point(int k, RngStream& rng);

// Orthonormal basis of the tangent space x^perp, as columns.
CMat tangent_frame(const ProjPoint& x);

// A projective line through `basepoint` with direction orthogonal to it.
// chart: zeta -> normalize(basepoint + zeta * direction) covers the line
// minus [direction]; injective on any disk.
struct ProjLine {
  ProjPoint basepoint;
  ProjPoint direction;
  double disk_radius = 2.0;

  CVec chart_lift(Complex zeta) const {
    return basepoint.coords + zeta * direction.coords;
  }
  ProjPoint chart(Complex zeta) const { return normalize_point(chart_lift(zeta)); }

  // The same line with basepoint and direction swapped; chart parameter
  // zeta' corresponds to 1/zeta of this chart.
  ProjLine inverted() const { return ProjLine{direction, basepoint, disk_radius}; }
};

ProjLine random_line(int k, RngStream& rng);
ProjLine line_through(const ProjPoint& x, const ProjPoint& y);

// An automorphism of P^k near the identity: the projectivization of
// exp(r * generator) with ||generator||_op <= 1.  Composition and inversion
// are exact in this chart (invert by negating the generator).
class AutoPerturbation {
 public:
  AutoPerturbation();  // identity on P^k for k = 2
  AutoPerturbation(double r, CMat generator);

  double radius() const { return r_; }
  const CMat& generator() const { return gen_; }
  const CMat& matrix() const { return mat_; }

  ProjPoint apply(const ProjPoint& x) const;
  CVec apply_lift(const CVec& x) const { return mat_ * x; }
  AutoPerturbation inverse() const { return AutoPerturbation(r_, -gen_); }

 private:
  double r_ = 0.0;
  CMat gen_;
  CMat mat_;
};

double operator_norm(const CMat& m);

// Draws a generator with Gaussian entries rescaled to a uniform operator
// norm in [0,1]; deterministic given the stream state.
AutoPerturbation random_perturbation(int k, double r, RngStream& rng);

// Empirical matching constant eta(r): a displacement bound such that sampled
// point pairs within eta(r) are joined by some perturbation in B_W(r).
// Estimated from the reachable-displacement infimum of boundary generators
// over sampled basepoints and directions.
double matching_constant(int k, double r, int samples, RngStream& rng);

// Finds sigma in B_W(r) with sigma(x) = y, or nullopt when y is out of
// reach (fs_distance(x,y) > atan(r)).
std::optional<AutoPerturbation> solve_matching(const ProjPoint& x,
                                               const ProjPoint& y, double r);

}  // namespace pkdyn
