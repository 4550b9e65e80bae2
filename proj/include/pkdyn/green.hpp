#pragma once

#include <optional>
#include <vector>

#include "pkdyn/endo.hpp"
#include "pkdyn/region.hpp"

namespace pkdyn {

// Weighted point cloud representing a probability-like measure.
struct AtomicMeasure {
  struct Atom {
    ProjPoint point;
    double weight;
  };
  std::vector<Atom> atoms;

  double total_mass() const;
  void scale(double c);
  // Pushes every atom forward by f (m-fold).
  AtomicMeasure pushed(const HomogeneousMap& f, int m = 1) const;
  // Mean of (z_num / z_den)^m over atoms, with a large clamp guarding the
  // chart pole.
  Complex ratio_moment(int num, int den, int m, double clamp = 1e6) const;
};

// Telescoped Green potential G(z) = log||z|| + sum d^{-(j+1)} log||F(x_j)||.
// Scale covariance G(c z) = G(z) + log|c| is exact by construction.
struct GreenEval {
  const HomogeneousMap* map;
  int n_max;
  double tail_bound;  // sup |log||F||| * d^{-n} / (d-1), from the stored sup

  GreenEval(const HomogeneousMap& f, int n);
  double value(const CVec& lift) const;
};

double green_value(const HomogeneousMap& f, const CVec& lift, int n);

// ---------------------------------------------------------------------------
// Slice measures [H] ^ T via the discrete Laplacian of G along the chart.

struct SliceGridSpec {
  double h = 0.02;         // coarse lattice spacing in the chart
  double radius = 2.0;     // chart disk radius
  int refine_depth = 0;    // extra uniform refinement levels of band cells
  double band_floor = 1e-7;       // |weight| marking a cell as band
  double clip_floor = 1e-9;       // clip weights below -clip_floor
  double richardson_bound = 0.10; // relative mass disagreement threshold
  bool richardson_check = true;
  int green_n = 40;
};

struct SliceMeasure {
  ProjLine line;
  SliceGridSpec spec;
  struct Atom {
    Complex zeta;
    ProjPoint point;
    double weight;
  };
  std::vector<Atom> atoms;
  double clipped_mass = 0.0;
  double coarse_mass = 0.0;  // level-0 mass (Richardson reference)

  double total_mass() const;
  AtomicMeasure to_measure() const;
};

SliceMeasure slice_measure(const HomogeneousMap& f, const ProjLine& line,
                           const SliceGridSpec& spec);

// ---------------------------------------------------------------------------
// Certified-residual preimage solver (k <= 2).

struct PreimagePoint {
  ProjPoint point;
  int multiplicity = 1;
  double residual = 0.0;
};

struct PreimageOptions {
  int cap = 4096;            // reject solves with d^{kn} above this
  double residual_tol = 1e-8;
  double merge_tol = 1e-7;   // roots closer than this merge
  const TrapRegion* filter = nullptr;  // keep only y inside the region
};

// All solutions of f^n(y) = x with multiplicities; multiplicity-weighted
// count is d^{kn} for generic x.  Chart degeneracies switch among the
// standard charts automatically; persistent failures throw SolverError.
std::vector<PreimagePoint> preimages(const HomogeneousMap& f,
                                     const ProjPoint& x, int n,
                                     const PreimageOptions& opts = {});

// ---------------------------------------------------------------------------
// Equilibrium-measure sampling by random backward orbits.

struct MuSampleOptions {
  int burn_in = 20;
  int chain_len = 64;  // points emitted per chain
  int max_restarts = 64;
};

AtomicMeasure mu_sample(const HomogeneousMap& f, int count, RngStream rng,
                        const MuSampleOptions& opts = {});

}  // namespace pkdyn
