#include "pkdyn/endo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/SVD>

#include "pkdyn/error.hpp"

namespace pkdyn {

namespace {

using ExpKey = std::uint32_t;

ExpKey pack(const std::array<std::uint8_t, 4>& e) {
  return ExpKey(e[0]) | ExpKey(e[1]) << 8 | ExpKey(e[2]) << 16 |
         ExpKey(e[3]) << 24;
}

std::array<std::uint8_t, 4> unpack(ExpKey k) {
  return {std::uint8_t(k & 0xff), std::uint8_t((k >> 8) & 0xff),
          std::uint8_t((k >> 16) & 0xff), std::uint8_t((k >> 24) & 0xff)};
}

}  // namespace

HomPoly HomPoly::monomial(int nvars, std::initializer_list<int> exps,
                          Complex coeff) {
  HomPoly p;
  p.nvars = nvars;
  Monomial m;
  int i = 0, deg = 0;
  for (int e : exps) {
    m.exp[i++] = static_cast<std::uint8_t>(e);
    deg += e;
  }
  m.coeff = coeff;
  p.degree = deg;
  p.terms.push_back(m);
  return p;
}

HomPoly& HomPoly::add(std::initializer_list<int> exps, Complex coeff) {
  Monomial m;
  int i = 0, deg = 0;
  for (int e : exps) {
    m.exp[i++] = static_cast<std::uint8_t>(e);
    deg += e;
  }
  m.coeff = coeff;
  if (terms.empty()) degree = deg;
  terms.push_back(m);
  return *this;
}

Complex HomPoly::eval(const CVec& z) const {
  Complex acc = 0.0;
  for (const auto& t : terms) {
    Complex v = t.coeff;
    for (int i = 0; i < nvars; ++i) {
      for (int e = 0; e < t.exp[i]; ++e) v *= z[i];
    }
    acc += v;
  }
  return acc;
}

HomPoly HomPoly::derivative(int var) const {
  HomPoly out;
  out.nvars = nvars;
  out.degree = degree > 0 ? degree - 1 : 0;
  for (const auto& t : terms) {
    if (t.exp[var] == 0) continue;
    Monomial m = t;
    m.coeff *= double(t.exp[var]);
    m.exp[var] -= 1;
    out.terms.push_back(m);
  }
  return out;
}

void HomPoly::merge_terms(double drop_tol) {
  std::map<ExpKey, Complex> acc;
  double maxabs = 0.0;
  for (const auto& t : terms) {
    acc[pack(t.exp)] += t.coeff;
    maxabs = std::max(maxabs, std::abs(t.coeff));
  }
  terms.clear();
  for (const auto& [key, c] : acc) {
    if (std::abs(c) <= drop_tol * maxabs) continue;
    terms.push_back(Monomial{unpack(key), c});
  }
}

HomPoly operator+(const HomPoly& a, const HomPoly& b) {
  HomPoly out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  if (out.terms.empty()) out.degree = 0;
  out.merge_terms();
  return out;
}

HomPoly operator*(const HomPoly& a, const HomPoly& b) {
  HomPoly out;
  out.nvars = std::max(a.nvars, b.nvars);
  out.degree = a.degree + b.degree;
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      Monomial m;
      for (int i = 0; i < 4; ++i)
        m.exp[i] = static_cast<std::uint8_t>(ta.exp[i] + tb.exp[i]);
      m.coeff = ta.coeff * tb.coeff;
      out.terms.push_back(m);
    }
  }
  out.merge_terms();
  return out;
}

HomPoly operator*(Complex c, const HomPoly& p) {
  HomPoly out = p;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

HomPoly HomPoly::compose_linear(const CMat& a) const {
  // Each variable z_i becomes the linear form (row i of a) . z.
  std::vector<HomPoly> rows(nvars);
  for (int i = 0; i < nvars; ++i) {
    rows[i].nvars = nvars;
    rows[i].degree = 1;
    for (int j = 0; j < nvars; ++j) {
      if (a(i, j) == Complex(0.0)) continue;
      Monomial m;
      m.exp[j] = 1;
      m.coeff = a(i, j);
      rows[i].terms.push_back(m);
    }
  }
  HomPoly out;
  out.nvars = nvars;
  out.degree = degree;
  for (const auto& t : terms) {
    HomPoly prod = HomPoly::monomial(nvars, {0, 0, 0}, t.coeff);
    prod.degree = 0;
    for (int i = 0; i < nvars; ++i)
      for (int e = 0; e < t.exp[i]; ++e) prod = prod * rows[i];
    out = out + prod;
  }
  out.degree = degree;
  out.merge_terms(1e-15);
  return out;
}

namespace {

// Macaulay-style nonvanishing screen for three ternary degree-d forms.
// A common projective zero forces the matrix below to be rank deficient, so
// a safely positive smallest singular value certifies the screen.
MapValidation macaulay_screen(const std::vector<HomPoly>& polys, int d) {
  MapValidation v;
  v.resultant_available = true;
  const int bigd = 3 * (d - 1) + 1;
  std::vector<std::array<int, 3>> monos;
  for (int a = 0; a <= bigd; ++a)
    for (int b = 0; a + b <= bigd; ++b) monos.push_back({a, b, bigd - a - b});
  const int n = static_cast<int>(monos.size());
  std::map<std::array<int, 3>, int> index;
  for (int i = 0; i < n; ++i) index[monos[i]] = i;

  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& a = monos[r];
    int which = a[0] >= d ? 0 : (a[1] >= d ? 1 : 2);
    std::array<int, 3> mult = a;
    mult[which] -= d;
    for (const auto& t : polys[which].terms) {
      std::array<int, 3> e = {mult[0] + t.exp[0], mult[1] + t.exp[1],
                              mult[2] + t.exp[2]};
      mat(r, index.at(e)) += t.coeff;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
  const auto& sv = svd.singularValues();
  v.resultant_sigma_min = sv(sv.size() - 1);
  const double sigma_max = sv(0);
  v.resultant_passed = sigma_max > 0.0 && v.resultant_sigma_min > 1e-8 * sigma_max;
  return v;
}

}  // namespace

HomogeneousMap::HomogeneousMap(int k, int d, std::vector<HomPoly> polys)
    : k_(k), d_(d), polys_(std::move(polys)) {
  if (static_cast<int>(polys_.size()) != k_ + 1)
    throw Error("HomogeneousMap: need k+1 polynomials");
  for (auto& p : polys_) {
    p.nvars = k_ + 1;
    p.merge_terms();
    for (const auto& t : p.terms) {
      int deg = 0;
      for (int i = 0; i <= k_; ++i) deg += t.exp[i];
      if (deg != d_) throw Error("HomogeneousMap: monomial degree mismatch");
    }
  }
  jac_.resize(k_ + 1);
  for (int i = 0; i <= k_; ++i) {
    jac_[i].reserve(k_ + 1);
    for (int j = 0; j <= k_; ++j) jac_[i].push_back(polys_[i].derivative(j));
  }

  // Indeterminacy screen and Green tail constant, sampled deterministically.
  RngStream rng(0xC0FFEEuLL);
  double min_norm = std::numeric_limits<double>::infinity();
  double sup_log = 0.0;
  const int n_samples = 2000;
  for (int s = 0; s < n_samples; ++s) {
    CVec z(k_ + 1);
    for (int i = 0; i <= k_; ++i) z[i] = rng.normal_complex();
    z /= z.norm();
    const double nf = eval(z).norm();
    min_norm = std::min(min_norm, nf);
    if (nf > 0.0) sup_log = std::max(sup_log, std::abs(std::log(nf)));
  }
  sup_abs_log_norm_ = sup_log;
  validation_.min_lift_norm = min_norm;
  validation_.sample_screen_passed = min_norm > 1e-10;
  if (k_ == 2 && d_ <= 3) {
    MapValidation mv = macaulay_screen(polys_, d_);
    validation_.resultant_available = mv.resultant_available;
    validation_.resultant_passed = mv.resultant_passed;
    validation_.resultant_sigma_min = mv.resultant_sigma_min;
  } else {
    validation_.note = "resultant check skipped (only offered for k=2, d<=3)";
  }
}

CVec HomogeneousMap::eval(const CVec& z) const {
  CVec out(k_ + 1);
  for (int i = 0; i <= k_; ++i) out[i] = polys_[i].eval(z);
  return out;
}

CMat HomogeneousMap::jacobian(const CVec& z) const {
  CMat out(k_ + 1, k_ + 1);
  for (int i = 0; i <= k_; ++i)
    for (int j = 0; j <= k_; ++j) out(i, j) = jac_[i][j].eval(z);
  return out;
}

ProjPoint HomogeneousMap::apply(const ProjPoint& x, double* log_factor) const {
  CVec y = eval(x.coords);
  const double s = y.norm();
  if (!(s > 1e-300))
    throw IndeterminacyHit("map vanishes at sampled point (lift norm " +
                           std::to_string(s) + ")");
  if (log_factor) *log_factor = std::log(s);
  return normalize_point(y);
}

JetState HomogeneousMap::propagate_jet(const JetState& j) const {
  const CVec& x = j.point.coords;
  CVec y = eval(x);
  const double s = y.norm();
  if (!(s > 1e-300)) throw IndeterminacyHit("jet hit an indeterminate point");

  JetState out;
  if (j.critical) {
    out.point = normalize_point(y);
    out.tangent = CVec::Zero(k_ + 1);
    out.logscale = kNegInf;
    out.critical = true;
    return out;
  }

  CVec w = jacobian(x) * j.tangent;
  // Keep the representative phase of point and tangent consistent.
  CVec p = y / s;
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double m = std::abs(p[i]);
    if (m > best * (1.0 + 1e-15)) {
      best = m;
      imax = i;
    }
  }
  const Complex phase = p[imax] / std::abs(p[imax]);
  p *= std::conj(phase);
  p[imax] = Complex(std::abs(p[imax]), 0.0);
  w *= std::conj(phase);

  w -= herm(w, p) * p;
  const double wn = w.norm();
  out.point = ProjPoint{p};
  if (wn == 0.0) {
    out.tangent = CVec::Zero(k_ + 1);
    out.logscale = kNegInf;
    out.critical = true;
  } else {
    out.tangent = w / wn;
    out.logscale = j.logscale + std::log(wn / s);
    out.critical = false;
  }
  return out;
}

ProjPoint HomogeneousMap::iterate(const ProjPoint& x, int n,
                                  std::vector<double>* step_logs) const {
  ProjPoint p = x;
  for (int i = 0; i < n; ++i) {
    double lf = 0.0;
    p = apply(p, &lf);
    if (step_logs) step_logs->push_back(lf);
  }
  return p;
}

HomogeneousMap HomogeneousMap::precompose(const CMat& a) const {
  std::vector<HomPoly> polys;
  polys.reserve(k_ + 1);
  for (const auto& p : polys_) polys.push_back(p.compose_linear(a));
  return HomogeneousMap(k_, d_, std::move(polys));
}

JetState make_jet(const ProjPoint& x, const CVec& tangent_dir) {
  CVec v = tangent_dir;
  v -= herm(v, x.coords) * x.coords;
  const double n = v.norm();
  if (n < 1e-14) throw Error("make_jet: direction parallel to the point");
  return JetState{x, v / n, 0.0, false};
}

std::string family_tag_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::POW: return "POW";
    case FamilyTag::LIN: return "LIN";
    case FamilyTag::SINKS: return "SINKS";
    case FamilyTag::CRIT: return "CRIT";
    case FamilyTag::CUSTOM: return "CUSTOM";
  }
  return "?";
}

FamilyTag family_tag_from_name(const std::string& name) {
  if (name == "POW") return FamilyTag::POW;
  if (name == "LIN") return FamilyTag::LIN;
  if (name == "SINKS") return FamilyTag::SINKS;
  if (name == "CRIT") return FamilyTag::CRIT;
  if (name == "CUSTOM") return FamilyTag::CUSTOM;
  throw ConfigError("unknown family tag: " + name);
}

FamilySpec FamilySpec::pow_map(int k, int d) {
  FamilySpec spec;
  spec.tag = FamilyTag::POW;
  spec.k = k;
  spec.d = d;
  return spec;
}

FamilySpec FamilySpec::lin_default(Complex eps, double rho) {
  FamilySpec spec;
  spec.tag = FamilyTag::LIN;
  spec.k = 2;
  spec.d = 2;
  spec.lin_g = {HomPoly::monomial(3, {2, 0, 0}, 1.0),
                HomPoly::monomial(3, {0, 2, 0}, 1.0)};
  spec.lin_R = {HomPoly::monomial(3, {2, 0, 0}, 1.0)};
  spec.epsilon = {eps};
  spec.rho = rho;
  return spec;
}

FamilySpec FamilySpec::sinks_default() {
  FamilySpec spec;
  spec.tag = FamilyTag::SINKS;
  spec.k = 2;
  spec.d = 2;
  spec.sinks_poly = {-1.0, 0.0, 1.0};  // z^2 - 1
  return spec;
}

FamilySpec FamilySpec::crit_default(Complex eps) {
  FamilySpec spec;
  spec.tag = FamilyTag::CRIT;
  spec.k = 2;
  spec.d = 2;
  spec.epsilon = {eps};
  return spec;
}

HomogeneousMap instantiate_family(const FamilySpec& spec,
                                  std::optional<Complex> lambda) {
  const int k = spec.k;
  const int d = spec.d;
  std::vector<HomPoly> polys;

  switch (spec.tag) {
    case FamilyTag::POW: {
      if (lambda) throw ParameterError("POW takes no parameter");
      for (int i = 0; i <= k; ++i) {
        HomPoly p;
        p.nvars = k + 1;
        p.degree = d;
        Monomial m;
        m.exp[i] = static_cast<std::uint8_t>(d);
        m.coeff = 1.0;
        p.terms.push_back(m);
        polys.push_back(p);
      }
      break;
    }
    case FamilyTag::LIN: {
      if (k != 2) throw ParameterError("LIN family is built for k = 2");
      Complex eps = spec.epsilon.empty() ? Complex(0.0) : spec.epsilon[0];
      if (lambda) eps = *lambda;
      if (std::abs(eps) > spec.eps_bound)
        throw ParameterError("LIN parameter outside admissible region");
      polys = spec.lin_g;
      HomPoly fiber = HomPoly::monomial(3, {0, 0, d}, 1.0);
      if (eps != Complex(0.0) && !spec.lin_R.empty())
        fiber = fiber + eps * spec.lin_R[0];
      polys.push_back(fiber);
      break;
    }
    case FamilyTag::SINKS: {
      if (lambda) throw ParameterError("SINKS takes no parameter");
      if (k != 2) throw ParameterError("SINKS family is built for k = 2");
      if (static_cast<int>(spec.sinks_poly.size()) != d + 1)
        throw ParameterError("SINKS polynomial must have degree d");
      HomPoly first;
      first.nvars = 3;
      first.degree = d;
      for (int j = 0; j <= d; ++j) {
        if (spec.sinks_poly[j] == Complex(0.0)) continue;
        Monomial m;
        m.exp[0] = static_cast<std::uint8_t>(j);
        m.exp[2] = static_cast<std::uint8_t>(d - j);
        m.coeff = spec.sinks_poly[j];
        first.terms.push_back(m);
      }
      polys.push_back(first);
      polys.push_back(HomPoly::monomial(3, {0, d, 0}, 1.0));
      polys.push_back(HomPoly::monomial(3, {0, 0, d}, 1.0));
      break;
    }
    case FamilyTag::CRIT: {
      if (k != 2) throw ParameterError("CRIT family is built for k = 2");
      Complex eps = spec.epsilon.empty() ? Complex(0.0) : spec.epsilon[0];
      if (lambda) eps = *lambda;
      if (std::abs(eps) > spec.eps_bound)
        throw ParameterError("CRIT parameter outside admissible region");
      polys.push_back(HomPoly::monomial(3, {d, 0, 0}, 1.0));
      polys.push_back(HomPoly::monomial(3, {0, d, 0}, 1.0));
      HomPoly fiber = HomPoly::monomial(3, {0, 0, d}, 1.0);
      if (eps != Complex(0.0))
        fiber = fiber + HomPoly::monomial(3, {d - 1, 1, 0}, eps);
      polys.push_back(fiber);
      break;
    }
    case FamilyTag::CUSTOM: {
      if (lambda) throw ParameterError("CUSTOM takes no parameter");
      polys = spec.custom_polys;
      break;
    }
  }

  HomogeneousMap map(k, d, std::move(polys));
  if (!map.validation().sample_screen_passed)
    throw ParameterError("map fails the indeterminacy sample screen");
  return map;
}

}  // namespace pkdyn
