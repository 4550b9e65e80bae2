#include "pkdyn/green.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "pkdyn/error.hpp"
#include "pkdyn/parallel.hpp"

namespace pkdyn {

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

void AtomicMeasure::scale(double c) {
  for (auto& a : atoms) a.weight *= c;
}

AtomicMeasure AtomicMeasure::pushed(const HomogeneousMap& f, int m) const {
  AtomicMeasure out;
  out.atoms.resize(atoms.size());
  parallel_for(atoms.size(), [&](std::size_t i) {
    ProjPoint p = atoms[i].point;
    for (int j = 0; j < m; ++j) p = f.apply(p);
    out.atoms[i] = Atom{p, atoms[i].weight};
  });
  return out;
}

Complex AtomicMeasure::ratio_moment(int num, int den, int m,
                                    double clamp) const {
  Complex acc = 0.0;
  double wsum = 0.0;
  for (const auto& a : atoms) {
    Complex r;
    const Complex zd = a.point.coords[den];
    if (std::abs(zd) * clamp < std::abs(a.point.coords[num])) {
      r = clamp;
    } else {
      r = a.point.coords[num] / zd;
    }
    Complex p = 1.0;
    for (int j = 0; j < m; ++j) p *= r;
    acc += a.weight * p;
    wsum += a.weight;
  }
  return wsum > 0.0 ? acc / wsum : Complex(0.0);
}

GreenEval::GreenEval(const HomogeneousMap& f, int n) : map(&f), n_max(n) {
  tail_bound = f.sup_abs_log_norm() * std::pow(double(f.degree()), -double(n)) /
               double(f.degree() - 1);
}

double GreenEval::value(const CVec& lift) const {
  return green_value(*map, lift, n_max);
}

double green_value(const HomogeneousMap& f, const CVec& lift, int n) {
  const double n0 = lift.norm();
  if (!(n0 > 0.0)) throw InvalidPoint("green_value: zero lift");
  double g = std::log(n0);
  CVec x = lift / n0;
  double dinv = 1.0 / double(f.degree());
  double factor = dinv;
  for (int j = 0; j < n; ++j) {
    CVec y = f.eval(x);
    const double s = y.norm();
    if (!(s > 1e-300)) throw IndeterminacyHit("green_value: orbit hit zero");
    g += factor * std::log(s);
    factor *= dinv;
    x = y / s;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Slice measures

namespace {

struct CellKey {
  int level;
  long ix, iy;
  bool operator==(const CellKey& o) const {
    return level == o.level && ix == o.ix && iy == o.iy;
  }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(k.level));
    mix(static_cast<std::uint64_t>(k.ix + (1L << 30)));
    mix(static_cast<std::uint64_t>(k.iy + (1L << 30)));
    return static_cast<std::size_t>(h);
  }
};

using ValueCache = std::unordered_map<CellKey, double, CellKeyHash>;

Complex cell_center(double h0, const CellKey& k) {
  const double hl = h0 / double(1 << k.level);
  return Complex(hl * (double(k.ix) + 0.5), hl * (double(k.iy) + 0.5));
}

// Ensures G values exist at the given lattice nodes; evaluates missing ones
// in parallel.
void ensure_values(const HomogeneousMap& f, const ProjLine& line, int green_n,
                   const std::vector<CellKey>& nodes, double h0,
                   ValueCache& cache) {
  std::vector<CellKey> missing;
  for (const auto& k : nodes)
    if (cache.find(k) == cache.end()) missing.push_back(k);
  std::sort(missing.begin(), missing.end(), [](const CellKey& a, const CellKey& b) {
    return std::tie(a.level, a.ix, a.iy) < std::tie(b.level, b.ix, b.iy);
  });
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::vector<double> vals(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) {
    vals[i] = green_value(f, line.chart_lift(cell_center(h0, missing[i])), green_n);
  });
  for (std::size_t i = 0; i < missing.size(); ++i) cache[missing[i]] = vals[i];
}

double cell_weight(const CellKey& k, const ValueCache& cache) {
  auto v = [&cache, &k](long dx, long dy) {
    return cache.at(CellKey{k.level, k.ix + dx, k.iy + dy});
  };
  return (v(1, 0) + v(-1, 0) + v(0, 1) + v(0, -1) - 4.0 * v(0, 0)) /
         (2.0 * kPi);
}

}  // namespace

double SliceMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

AtomicMeasure SliceMeasure::to_measure() const {
  AtomicMeasure m;
  m.atoms.reserve(atoms.size());
  for (const auto& a : atoms) m.atoms.push_back({a.point, a.weight});
  return m;
}

SliceMeasure slice_measure(const HomogeneousMap& f, const ProjLine& line,
                           const SliceGridSpec& spec) {
  SliceMeasure out;
  out.line = line;
  out.spec = spec;

  ValueCache cache;
  const double h0 = spec.h;

  // Level-0 cells covering the chart disk.
  std::vector<CellKey> cells;
  const long n_half = static_cast<long>(std::ceil(spec.radius / h0)) + 1;
  for (long i = -n_half; i < n_half; ++i) {
    for (long j = -n_half; j < n_half; ++j) {
      CellKey k{0, i, j};
      if (std::abs(cell_center(h0, k)) <= spec.radius) cells.push_back(k);
    }
  }

  std::vector<std::pair<CellKey, double>> leaves;
  double prev_mass = 0.0;
  bool have_prev = false;
  // The Richardson control needs at least one h vs h/2 comparison.
  const int depth = std::max(spec.refine_depth, spec.richardson_check ? 1 : 0);

  for (int level = 0; !cells.empty(); ++level) {
    std::vector<CellKey> nodes;
    nodes.reserve(cells.size() * 5);
    for (const auto& k : cells) {
      nodes.push_back(k);
      nodes.push_back({k.level, k.ix + 1, k.iy});
      nodes.push_back({k.level, k.ix - 1, k.iy});
      nodes.push_back({k.level, k.ix, k.iy + 1});
      nodes.push_back({k.level, k.ix, k.iy - 1});
    }
    ensure_values(f, line, spec.green_n, nodes, h0, cache);

    std::vector<CellKey> band;
    double level_band_mass = 0.0, level_leaf_mass = 0.0;
    for (const auto& k : cells) {
      const double w = cell_weight(k, cache);
      const bool in_band = std::abs(w) > spec.band_floor;
      if (in_band && level < spec.refine_depth) {
        band.push_back(k);
        level_band_mass += w;
      } else {
        leaves.emplace_back(k, w);
        level_leaf_mass += w;
      }
    }
    if (level == 0) out.coarse_mass = level_band_mass + level_leaf_mass;

    // Richardson control: compare this level's total against the previous
    // level's (band cells re-expressed by their children).
    const double mass_now = level_band_mass + level_leaf_mass;
    if (have_prev && spec.richardson_check) {
      const double denom = std::max(std::abs(prev_mass), 1e-6);
      if (std::abs(mass_now - prev_mass) / denom > spec.richardson_bound) {
        throw ResolutionError(
            "slice Laplacian not resolved; refine the grid",
            h0 / double(1 << (level + 1)));
      }
    }
    prev_mass = level_band_mass;  // next level re-expresses only band cells
    have_prev = !band.empty();

    cells.clear();
    for (const auto& k : band) {
      cells.push_back({k.level + 1, 2 * k.ix, 2 * k.iy});
      cells.push_back({k.level + 1, 2 * k.ix + 1, 2 * k.iy});
      cells.push_back({k.level + 1, 2 * k.ix, 2 * k.iy + 1});
      cells.push_back({k.level + 1, 2 * k.ix + 1, 2 * k.iy + 1});
    }
  }

  out.atoms.reserve(leaves.size());
  for (const auto& [k, w0] : leaves) {
    double w = w0;
    if (w < -spec.clip_floor) {
      out.clipped_mass += -w;
      w = 0.0;
    }
    if (std::abs(w) < 1e-15) continue;
    const Complex zeta = cell_center(h0, k);
    out.atoms.push_back({zeta, line.chart(zeta), w});
  }
  return out;
}

}  // namespace pkdyn
