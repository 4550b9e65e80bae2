#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pkdyn/projgeom.hpp"
#include "pkdyn/types.hpp"

namespace pkdyn {

// Sparse homogeneous polynomial in up to 4 variables.
struct Monomial {
  std::array<std::uint8_t, 4> exp{0, 0, 0, 0};
  Complex coeff;
};

struct HomPoly {
  int nvars = 3;
  int degree = 0;
  std::vector<Monomial> terms;

  static HomPoly monomial(int nvars, std::initializer_list<int> exps,
                          Complex coeff);
  HomPoly& add(std::initializer_list<int> exps, Complex coeff);

  Complex eval(const CVec& z) const;
  HomPoly derivative(int var) const;
  // p(A z) expanded as a homogeneous polynomial of the same degree.
  HomPoly compose_linear(const CMat& a) const;
  void merge_terms(double drop_tol = 0.0);
};

HomPoly operator+(const HomPoly& a, const HomPoly& b);
HomPoly operator*(const HomPoly& a, const HomPoly& b);
HomPoly operator*(Complex c, const HomPoly& p);

// First-order jet carried along orbits: a point, a unit (1,0) tangent
// direction represented in the ambient lift, and the accumulated log of the
// Fubini-Study derivative magnitude.  `critical` marks an exactly degenerate
// derivative (logscale is then -inf).
struct JetState {
  ProjPoint point;
  CVec tangent;
  double logscale = 0.0;
  bool critical = false;
};

struct MapValidation {
  double min_lift_norm = 0.0;       // sample screen over the unit sphere
  bool sample_screen_passed = false;
  bool resultant_available = false; // Macaulay check offered for k=2, d<=3
  bool resultant_passed = false;
  double resultant_sigma_min = 0.0;
  std::string note;
};

// A degree-d holomorphic endomorphism of P^k given by k+1 homogeneous
// polynomials.  Immutable after construction; all evaluation is reentrant.
class HomogeneousMap {
 public:
  HomogeneousMap(int k, int d, std::vector<HomPoly> polys);

  int k() const { return k_; }
  int degree() const { return d_; }
  const std::vector<HomPoly>& polys() const { return polys_; }

  CVec eval(const CVec& z) const;
  CMat jacobian(const CVec& z) const;

  // normalize(F(x)); optionally records log||F(x)|| (x assumed unit).
  ProjPoint apply(const ProjPoint& x, double* log_factor = nullptr) const;
  JetState propagate_jet(const JetState& j) const;

  // n-fold apply retaining per-step normalization log-factors.
  ProjPoint iterate(const ProjPoint& x, int n,
                    std::vector<double>* step_logs = nullptr) const;

  // sup over the unit sphere of |log ||F|||, sampled once at construction;
  // drives Green tail bounds.
  double sup_abs_log_norm() const { return sup_abs_log_norm_; }

  const MapValidation& validation() const { return validation_; }

  // The same map with the domain precomposed by the linear map A (i.e.
  // z -> F(A z)); used for chart changes in the preimage solver.
  HomogeneousMap precompose(const CMat& a) const;

 private:
  int k_;
  int d_;
  std::vector<HomPoly> polys_;
  std::vector<std::vector<HomPoly>> jac_;  // jac_[i][j] = d polys_[i] / d z_j
  double sup_abs_log_norm_ = 0.0;
  MapValidation validation_;
};

JetState make_jet(const ProjPoint& x, const CVec& tangent_dir);

enum class FamilyTag { POW, LIN, SINKS, CRIT, CUSTOM };

std::string family_tag_name(FamilyTag tag);
FamilyTag family_tag_from_name(const std::string& name);

// Parameterized families.  LIN is the skew product
//   [g0(z0,z1) : g1(z0,z1) : z2^d + eps * R(z0,z1,z2)]
// whose eps = 0 member leaves the line L = {z2 = 0} invariant and keeps the
// gauge region U_rho trapping for small rho.  SINKS homogenizes
// (z, w) -> (p(z), w^d).  CRIT perturbs the power map by eps z0^{d-1} z1 in
// the last coordinate.
struct FamilySpec {
  FamilyTag tag = FamilyTag::POW;
  int k = 2;
  int d = 2;

  std::vector<HomPoly> lin_g;       // LIN: s+1 binary forms
  std::vector<HomPoly> lin_R;       // LIN: p degree-d forms in all variables
  std::vector<Complex> epsilon;     // LIN / CRIT parameter(s)
  double rho = 0.2;                 // associated gauge parameter (metadata)
  double eps_bound = 1.0;           // admissible |epsilon|
  std::vector<Complex> sinks_poly;  // SINKS: coefficients a_0..a_d of p(z)
  std::vector<HomPoly> custom_polys;

  static FamilySpec pow_map(int k, int d);
  static FamilySpec lin_default(Complex eps, double rho = 0.2);
  static FamilySpec sinks_default();  // p(z) = z^2 - 1
  static FamilySpec crit_default(Complex eps);
};

// Instantiates the family at its stored parameter, or at lambda when given
// (lambda replaces epsilon for LIN/CRIT).  Throws ParameterError outside the
// admissible region and when the indeterminacy screen fails.
HomogeneousMap instantiate_family(const FamilySpec& spec,
                                  std::optional<Complex> lambda = {});

}  // namespace pkdyn
