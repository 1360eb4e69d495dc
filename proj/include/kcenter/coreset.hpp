#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/graph.hpp"
#include "kcenter/metric.hpp"
#include "kcenter/solvers.hpp"

namespace kcenter {

struct CoresetResult {
  enum class Mode { ByK, ByRadius };

  std::vector<std::size_t> subset;  // ascending point ids
  double cover_radius = 0.0;        // every point lies within this of the subset
  double separation = 0.0;          // subset points are pairwise farther than this
  Mode mode = Mode::ByRadius;
  double requested_r = 0.0;         // ByRadius: the covering radius asked for
  std::size_t requested_k = 0;      // ByK: the k the sizing was derived from
  int halvings = 0;                 // ByK: halving depth applied to the base radius
  std::optional<double> epsilon;    // set when the depth was derived from an epsilon
  std::size_t delta = 0;            // largest star: points sharing one subset point
  std::uint64_t work = 0;           // distance evaluations
  // Machine that contributed each subset point, aligned with subset.
  // Empty for single-machine constructions.
  std::vector<std::size_t> machine_of;

  std::size_t size() const { return subset.size(); }
};

namespace detail {

// Fills delta (max points per subset point under nearest assignment, ties to
// the lowest id) and verifies nothing lies beyond the covering radius.
inline void finish_coreset(DistanceMeter& dist, CoresetResult& res) {
  std::size_t n = dist.space().size();
  std::vector<std::size_t> star(res.subset.size(), 0);
  for (std::size_t p = 0; p < n; ++p) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t owner = 0;
    for (std::size_t ci = 0; ci < res.subset.size(); ++ci) {
      double d = dist(res.subset[ci], p);
      if (d < best) {
        best = d;
        owner = ci;
      }
    }
    if (best > res.cover_radius)
      throw GuardError("coreset construction failed to cover a point; broken invariant");
    ++star[owner];
  }
  res.delta = 0;
  for (std::size_t s : star) res.delta = std::max(res.delta, s);
}

}  // namespace detail

// Greedy net covering every point within r: MIS of the squared disk graph at
// threshold r/2. Net points end up pairwise more than r/2 apart, and every
// point reaches its net point through at most two hops of r/2.
inline CoresetResult dual_clustering(const MetricSpace& space, double r,
                                     const VisitOrder& order) {
  if (!(r > 0.0)) throw UsageError("dual clustering: radius must be positive");
  if (order.perm.size() != space.size())
    throw UsageError("dual clustering: bad visit order");
  DistanceMeter dist(space);
  Graph g = build_disk_graph(dist, r / 2.0);
  CoresetResult res;
  res.subset = greedy_mis(square(g), order);
  res.cover_radius = r;
  res.separation = r / 2.0;
  res.mode = CoresetResult::Mode::ByRadius;
  res.requested_r = r;
  detail::finish_coreset(dist, res);
  res.work = dist.evals();
  return res;
}

// Coreset sized from k: take the farthest-first radius for k centers, halve it
// R times, and build the net that covers at that scale. With zero base radius
// the distinct points themselves are the only sensible answer.
inline CoresetResult coreset_for_k(const MetricSpace& space, std::size_t k,
                                   int R_halvings, const VisitOrder& order,
                                   std::size_t start = 0) {
  if (R_halvings < 0) throw UsageError("coreset: halving depth must be nonnegative");
  if (order.perm.size() != space.size()) throw UsageError("coreset: bad visit order");
  DistanceMeter dist(space);
  double r0 = detail::gonzalez_core(dist, k, start).radius;

  CoresetResult res;
  res.mode = CoresetResult::Mode::ByK;
  res.requested_k = k;
  res.halvings = R_halvings;

  if (r0 == 0.0) {
    res.subset = distinct_representatives(dist);
    res.cover_radius = 0.0;
    res.separation = 0.0;
    detail::finish_coreset(dist, res);
    res.work = dist.evals();
    return res;
  }

  double r_cov = std::ldexp(r0, -R_halvings);  // exact halving
  Graph g = build_disk_graph(dist, r_cov / 2.0);
  res.subset = greedy_mis(square(g), order);
  res.cover_radius = r_cov;
  res.separation = r_cov / 2.0;
  detail::finish_coreset(dist, res);
  res.work = dist.evals();
  return res;
}

// Smallest halving depth whose scale shrink factor 2^-R reaches epsilon/2.
inline int halvings_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 2.0)
    throw UsageError("epsilon coreset: epsilon must lie in (0, 2]");
  int R = 0;
  while (std::ldexp(epsilon, R) < 2.0) {
    ++R;
    if (R > 64) throw GuardError("epsilon coreset: halving depth out of range");
  }
  return R;
}

// Coreset on which the optimal k-center radius stays within (1+epsilon) of
// the optimum on the full set.
inline CoresetResult epsilon_coreset(const MetricSpace& space, std::size_t k,
                                     double epsilon, const VisitOrder& order,
                                     std::size_t start = 0) {
  int R = halvings_for_epsilon(epsilon);
  CoresetResult res = coreset_for_k(space, k, R, order, start);
  res.epsilon = epsilon;
  return res;
}

struct TradeoffRow {
  int R = 0;
  std::size_t size = 0;
  double cover_radius = 0.0;
};

// One coreset per halving depth 0..max_R; the covering radius halves exactly
// from row to row while the size grows.
inline std::vector<TradeoffRow> tradeoff_table(const MetricSpace& space, std::size_t k,
                                               int max_R, const VisitOrder& order,
                                               std::size_t start = 0) {
  if (max_R < 0) throw UsageError("tradeoff table: max depth must be nonnegative");
  std::vector<TradeoffRow> rows;
  for (int R = 0; R <= max_R; ++R) {
    CoresetResult c = coreset_for_k(space, k, R, order, start);
    rows.push_back({R, c.size(), c.cover_radius});
  }
  return rows;
}

}  // namespace kcenter
