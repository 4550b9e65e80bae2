#include "pkdyn/projgeom.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace pkdyn {

Complex herm(const CVec& a, const CVec& b) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

ProjPoint normalize_point(const CVec& raw) {
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidPoint("all coordinates zero or non-finite");
  }
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double m = std::abs(raw[i]);
    if (m > best * (1.0 + 1e-15)) {  // strict improvement; ties keep lowest index
      best = m;
      imax = i;
    }
  }
  if (best == 0.0) throw InvalidPoint("all coordinates zero");
  const Complex phase = raw[imax] / std::abs(raw[imax]);
  CVec out = raw * (std::conj(phase) / norm);
  out[imax] = Complex(std::abs(out[imax]), 0.0);  // kill rounding residue
  return ProjPoint{out};
}

double fs_distance(const ProjPoint& x, const ProjPoint& y) {
  const double c = std::abs(herm(x.coords, y.coords));
  return std::acos(std::clamp(c, 0.0, 1.0));
}

ProjPoint random_point(int k, RngStream& rng) {
  CVec v(k + 1);
  for (int i = 0; i <= k; ++i) v[i] = rng.normal_complex();
  return normalize_point(v);
}

CMat tangent_frame(const ProjPoint& x) {
  const int n = static_cast<int>(x.coords.size());
  CMat frame(n, n - 1);
  int col = 0;
  for (int i = 0; i < n && col < n - 1; ++i) {
    CVec v = CVec::Zero(n);
    v[i] = 1.0;
    v -= herm(v, x.coords) * x.coords;
    for (int j = 0; j < col; ++j) {
      CVec fj = frame.col(j);
      v -= herm(v, fj) * fj;
    }
    const double nv = v.norm();
    if (nv < 1e-8) continue;  // basis vector parallel to x; skip
    frame.col(col++) = v / nv;
  }
  return frame;
}

ProjLine random_line(int k, RngStream& rng) {
  const ProjPoint b = random_point(k, rng);
  for (;;) {
    CVec v(k + 1);
    for (int i = 0; i <= k; ++i) v[i] = rng.normal_complex();
    v -= herm(v, b.coords) * b.coords;
    if (v.norm() > 1e-6) return ProjLine{b, normalize_point(v)};
  }
}

ProjLine line_through(const ProjPoint& x, const ProjPoint& y) {
  CVec v = y.coords - herm(y.coords, x.coords) * x.coords;
  if (v.norm() < 1e-12) throw InvalidPoint("line_through: points coincide");
  return ProjLine{x, normalize_point(v)};
}

AutoPerturbation::AutoPerturbation() : r_(0.0) {
  gen_ = CMat::Zero(3, 3);
  mat_ = CMat::Identity(3, 3);
}

AutoPerturbation::AutoPerturbation(double r, CMat generator)
    : r_(r), gen_(std::move(generator)) {
  const Eigen::Index n = gen_.rows();
  if (r_ == 0.0) {
    mat_ = CMat::Identity(n, n);
  } else {
    Eigen::MatrixXcd g = r_ * Eigen::MatrixXcd(gen_);
    mat_ = g.exp();
  }
}

ProjPoint AutoPerturbation::apply(const ProjPoint& x) const {
  return normalize_point(mat_ * x.coords);
}

double operator_norm(const CMat& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

AutoPerturbation random_perturbation(int k, double r, RngStream& rng) {
  if (r < 0.0 || r > 1.0) throw RangeError("perturbation radius outside [0,1]");
  CMat g(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) g(i, j) = rng.normal_complex();
  const double target = rng.uniform();  // operator norm uniform in [0,1]
  const double norm = operator_norm(g);
  if (norm > 0.0) g *= target / norm;
  return AutoPerturbation(r, std::move(g));
}

double matching_constant(int k, double r, int samples, RngStream& rng) {
  if (r == 0.0) return 0.0;
  if (r < 0.0 || r > 1.0) throw RangeError("matching radius outside (0,1]");
  double eta = kPi;
  const int dirs = 4;
  for (int s = 0; s < samples; ++s) {
    const ProjPoint x = random_point(k, rng);
    const CMat frame = tangent_frame(x);
    for (int t = 0; t < dirs; ++t) {
      CVec v = CVec::Zero(k + 1);
      for (Eigen::Index j = 0; j < frame.cols(); ++j)
        v += rng.normal_complex() * frame.col(j);
      const double nv = v.norm();
      if (nv < 1e-12) continue;
      v /= nv;
      // Boundary generator v x^H is nilpotent, so exp(r M) x = x + r v; the
      // matrix route below measures the same displacement numerically.
      CMat gen = v * x.coords.adjoint();
      AutoPerturbation sigma(r, std::move(gen));
      eta = std::min(eta, fs_distance(x, sigma.apply(x)));
    }
  }
  return eta;
}

std::optional<AutoPerturbation> solve_matching(const ProjPoint& x,
                                               const ProjPoint& y, double r) {
  if (r <= 0.0 || r > 1.0) throw RangeError("matching radius outside (0,1]");
  const Complex alpha = herm(y.coords, x.coords);
  if (std::abs(alpha) < 1e-14) return std::nullopt;  // antipodal: unreachable
  CVec w = y.coords / alpha - x.coords;  // y ~ x + w with w orthogonal to x
  w -= herm(w, x.coords) * x.coords;     // clean rounding residue
  const double t = w.norm();
  if (t > r) return std::nullopt;
  CMat gen = (w / r) * x.coords.adjoint();  // exp(r gen) = I + w x^H
  return AutoPerturbation(r, std::move(gen));
}

}  // namespace pkdyn
