#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/rng.hpp"

namespace kcenter {

// Immutable set of points in R^dim, row-major storage.
struct PointSet {
  std::vector<double> coords;
  std::size_t dim = 0;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }

  void push(std::span<const double> p) {
    coords.insert(coords.end(), p.begin(), p.end());
  }
};

// Finite metric over point ids 0..n-1. Either Euclidean over a PointSet or an
// explicit symmetric distance matrix. Immutable after construction.
class MetricSpace {
 public:
  // Optional caller-supplied doubling-constant hint (log2 of it). Metadata
  // only: nothing in the toolkit estimates or consumes it algorithmically.
  std::optional<double> doubling_dim_hint;

  static MetricSpace euclidean(PointSet ps) {
    MetricSpace s;
    for (double v : ps.coords)
      if (!std::isfinite(v)) throw UsageError("point set has non-finite coordinate");
    s.points_ = std::move(ps);
    s.n_ = s.points_.size();
    s.euclidean_ = true;
    return s;
  }

  // Row-major n*n matrix. Shape properties (square, symmetric, zero diagonal,
  // nonnegative, finite) are enforced here; the triangle inequality is only
  // examined by validate_metric.
  static MetricSpace from_matrix(std::vector<double> m, std::size_t n) {
    if (n == 0 || m.size() != n * n) throw UsageError("distance matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i * n + i] != 0.0) throw UsageError("distance matrix diagonal must be zero");
      for (std::size_t j = 0; j < n; ++j) {
        double v = m[i * n + j];
        if (!std::isfinite(v) || v < 0.0) throw UsageError("distance matrix entry invalid");
        if (v != m[j * n + i]) throw UsageError("distance matrix is not symmetric");
      }
    }
    MetricSpace s;
    s.matrix_ = std::move(m);
    s.n_ = n;
    s.euclidean_ = false;
    return s;
  }

  std::size_t size() const { return n_; }
  bool is_euclidean() const { return euclidean_; }
  const PointSet& points() const { return points_; }

  double distance(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw UsageError("point index out of range");
    if (!euclidean_) return matrix_[i * n_ + j];
    const double* a = points_.coords.data() + i * points_.dim;
    const double* b = points_.coords.data() + j * points_.dim;
    double s = 0.0;
    for (std::size_t d = 0; d < points_.dim; ++d) {
      double diff = a[d] - b[d];
      s += diff * diff;
    }
    return std::sqrt(s);
  }

 private:
  PointSet points_;
  std::vector<double> matrix_;
  std::size_t n_ = 0;
  bool euclidean_ = true;
};

// Counting wrapper around MetricSpace::distance. Every algorithm in the
// toolkit routes its distance evaluations through one of these, so reported
// work equals the exact number of evaluations.
class DistanceMeter {
 public:
  explicit DistanceMeter(const MetricSpace& s) : space_(&s) {}

  double operator()(std::size_t i, std::size_t j) {
    ++evals_;
    return space_->distance(i, j);
  }

  std::uint64_t evals() const { return evals_; }
  void add(std::uint64_t e) { evals_ += e; }
  const MetricSpace& space() const { return *space_; }

 private:
  const MetricSpace* space_;
  std::uint64_t evals_ = 0;
};

// Restriction of a space to the given ids; position p in the result
// corresponds to ids[p] in the parent.
inline MetricSpace subspace(const MetricSpace& s, std::span<const std::size_t> ids) {
  if (s.is_euclidean()) {
    PointSet ps;
    ps.dim = s.points().dim;
    for (std::size_t id : ids) ps.push(s.points().point(id));
    MetricSpace r = MetricSpace::euclidean(std::move(ps));
    r.doubling_dim_hint = s.doubling_dim_hint;
    return r;
  }
  std::size_t m = ids.size();
  std::vector<double> mat(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) mat[a * m + b] = s.distance(ids[a], ids[b]);
  MetricSpace r = MetricSpace::from_matrix(std::move(mat), m);
  r.doubling_dim_hint = s.doubling_dim_hint;
  return r;
}

// Lowest-index representative of every zero-distance class, ascending.
// Used by the degenerate (zero target radius) coreset paths.
inline std::vector<std::size_t> distinct_representatives(DistanceMeter& dist) {
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < dist.space().size(); ++i) {
    bool dup = false;
    for (std::size_t r : reps)
      if (dist(r, i) == 0.0) { dup = true; break; }
    if (!dup) reps.push_back(i);
  }
  return reps;
}

inline std::vector<std::size_t> distinct_representatives(const MetricSpace& s) {
  DistanceMeter m(s);
  return distinct_representatives(m);
}

struct MetricValidation {
  bool ok = true;
  bool checked = false;           // true when the triangle scan actually ran
  std::uint64_t triples = 0;      // triangle inequalities examined
  // first violation found, as (i, via, j): d(i,via) + d(via,j) < d(i,j)
  std::size_t wi = 0, wvia = 0, wj = 0;
  std::string message;
};

// Exhaustive triangle-inequality check for explicit matrices. Euclidean
// spaces are valid by construction and are not scanned. The O(n^3) scan is
// skipped above n = 200 unless force is set.
inline MetricValidation validate_metric(const MetricSpace& s, bool force = false) {
  MetricValidation v;
  if (s.is_euclidean()) {
    v.message = "euclidean space, triangle check skipped";
    return v;
  }
  std::size_t n = s.size();
  if (n > 200 && !force) {
    v.message = "matrix larger than 200 points, triangle check skipped (pass force)";
    return v;
  }
  v.checked = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        ++v.triples;
        if (s.distance(i, k) + s.distance(k, j) < s.distance(i, j)) {
          v.ok = false;
          v.wi = i; v.wvia = k; v.wj = j;
          v.message = "triangle inequality violated";
          return v;
        }
      }
  v.message = "triangle inequality holds";
  return v;
}

// ---------------------------------------------------------------------------
// Synthetic instance generators.

struct GeneratorSpec {
  enum class Kind { UniformBox, GaussianClusters, CollinearLine, RecursiveCover };
  Kind kind = Kind::UniformBox;
  std::size_t n = 0;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  // gaussian-clusters
  std::size_t clusters = 3;
  double spread = 0.05;
  // collinear-line
  double spacing = 0.5;
  // recursive-cover
  int depth = 2;
  double base_radius = 1.0;
};

namespace detail {

// Hexagon orientation per recursion level of the recursive-cover generator.
// The offsets between levels are chosen so that no two generated points
// coincide and the separation structure stays clean at every halving scale
// (exact-tie geometry on hex axes is avoided except where wanted).
inline double cover_rotation(int level) {
  // 24 and 36 degrees, calibrated by grid search: keeps every cross-branch
  // point gap well clear of the net thresholds r0/2^R (closest tie margin
  // ~0.009 at depth 3) while maximizing the minimum separation between
  // sibling subtrees (0.083 at depth 2, 0.042 at depth 3, base radius 1).
  static const double rot[4] = {0.0, 0.0, 0.4188790204786391, 0.6283185307179586};
  if (level <= 3) return rot[level];
  return rot[3] + (level - 3) * 0.37;
}

inline void cover_emit(PointSet& ps, double cx, double cy, double radius,
                       int level, int depth) {
  if (level == depth) {
    const double p[2] = {cx, cy};
    ps.push(p);
    return;
  }
  double step = radius / 2.0;
  // centre child first: depth-R subtree roots come first in index order
  cover_emit(ps, cx, cy, step, level + 1, depth);
  double rot = cover_rotation(level + 1);
  for (int m = 0; m < 6; ++m) {
    double a = rot + m * (M_PI / 3.0);
    cover_emit(ps, cx + step * std::cos(a), cy + step * std::sin(a), step,
               level + 1, depth);
  }
}

}  // namespace detail

// Deterministic point-set generation: a pure function of the spec (seed
// included). recursive-cover is fully determined by depth and base radius.
inline PointSet generate(const GeneratorSpec& g) {
  PointSet ps;
  switch (g.kind) {
    case GeneratorSpec::Kind::UniformBox: {
      if (g.n == 0 || g.dim == 0) throw UsageError("uniform-box needs n > 0, dim > 0");
      ps.dim = g.dim;
      Rng rng = Rng::stream(g.seed, "generator");
      for (std::size_t i = 0; i < g.n * g.dim; ++i)
        ps.coords.push_back(rng.uniform01());
      break;
    }
    case GeneratorSpec::Kind::GaussianClusters: {
      if (g.n == 0 || g.dim == 0 || g.clusters == 0)
        throw UsageError("gaussian-clusters needs n, dim, clusters > 0");
      ps.dim = g.dim;
      Rng centers = Rng::stream(g.seed, "generator.centers");
      std::vector<double> c(g.clusters * g.dim);
      for (double& v : c) v = centers.uniform01();
      Rng noise = Rng::stream(g.seed, "generator.noise");
      for (std::size_t i = 0; i < g.n; ++i) {
        std::size_t cl = i % g.clusters;
        for (std::size_t d = 0; d < g.dim; ++d)
          ps.coords.push_back(c[cl * g.dim + d] + noise.normal(0.0, g.spread));
      }
      break;
    }
    case GeneratorSpec::Kind::CollinearLine: {
      if (g.n == 0) throw UsageError("collinear-line needs n > 0");
      if (!(g.spacing > 0.0)) throw UsageError("collinear-line needs spacing > 0");
      ps.dim = 1;
      for (std::size_t i = 0; i < g.n; ++i)
        ps.coords.push_back(static_cast<double>(i) * g.spacing);
      break;
    }
    case GeneratorSpec::Kind::RecursiveCover: {
      if (g.depth < 0 || g.depth > 7) throw UsageError("recursive-cover depth must be in 0..7");
      if (!(g.base_radius > 0.0)) throw UsageError("recursive-cover needs base radius > 0");
      ps.dim = 2;
      detail::cover_emit(ps, 0.0, 0.0, g.base_radius, 0, g.depth);
      break;
    }
  }
  return ps;
}

// Mini-language for generator specs:
//   box:N[:DIM]                      uniform in [0,1]^DIM          (DIM=2)
//   gauss:N[:DIM[:CLUSTERS[:SPREAD]]] gaussian blobs               (2,3,0.05)
//   line:N[:SPACING]                 collinear, 1-D                (0.5)
//   cover:DEPTH[:RADIUS]             recursive hex cover, 7^DEPTH points
inline GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') { parts.push_back(cur); cur.clear(); }
    else cur.push_back(ch);
  }
  parts.push_back(cur);

  auto need_u = [&](std::size_t idx, const char* what) -> std::uint64_t {
    try {
      std::size_t pos = 0;
      long long v = std::stoll(parts.at(idx), &pos);
      if (pos != parts[idx].size() || v < 0) throw std::invalid_argument("");
      return static_cast<std::uint64_t>(v);
    } catch (...) {
      throw UsageError(std::string("generator spec: bad ") + what + " in '" + text + "'");
    }
  };
  auto opt_d = [&](std::size_t idx, double dflt, const char* what) -> double {
    if (idx >= parts.size()) return dflt;
    try {
      std::size_t pos = 0;
      double v = std::stod(parts[idx], &pos);
      if (pos != parts[idx].size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw UsageError(std::string("generator spec: bad ") + what + " in '" + text + "'");
    }
  };

  GeneratorSpec g;
  g.seed = seed;
  if (parts.empty() || parts.size() > 5) throw UsageError("generator spec: '" + text + "'");
  const std::string& kind = parts[0];
  if (kind == "box") {
    g.kind = GeneratorSpec::Kind::UniformBox;
    if (parts.size() < 2) throw UsageError("generator spec: box needs a count");
    g.n = need_u(1, "count");
    g.dim = parts.size() > 2 ? static_cast<std::size_t>(need_u(2, "dim")) : 2;
  } else if (kind == "gauss") {
    g.kind = GeneratorSpec::Kind::GaussianClusters;
    if (parts.size() < 2) throw UsageError("generator spec: gauss needs a count");
    g.n = need_u(1, "count");
    g.dim = parts.size() > 2 ? static_cast<std::size_t>(need_u(2, "dim")) : 2;
    g.clusters = parts.size() > 3 ? static_cast<std::size_t>(need_u(3, "clusters")) : 3;
    g.spread = opt_d(4, 0.05, "spread");
  } else if (kind == "line") {
    g.kind = GeneratorSpec::Kind::CollinearLine;
    if (parts.size() < 2) throw UsageError("generator spec: line needs a count");
    g.n = need_u(1, "count");
    g.spacing = opt_d(2, 0.5, "spacing");
    g.dim = 1;
  } else if (kind == "cover") {
    g.kind = GeneratorSpec::Kind::RecursiveCover;
    if (parts.size() < 2) throw UsageError("generator spec: cover needs a depth");
    g.depth = static_cast<int>(need_u(1, "depth"));
    g.base_radius = opt_d(2, 1.0, "radius");
    std::size_t n = 1;
    for (int i = 0; i < g.depth; ++i) n *= 7;
    g.n = n;
    g.dim = 2;
  } else {
    throw UsageError("generator spec: unknown kind '" + kind + "'");
  }
  return g;
}

}  // namespace kcenter
