#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/graph.hpp"
#include "kcenter/metric.hpp"

namespace kcenter {

struct ClusteringResult {
  std::string algo;
  std::size_t k = 0;  // requested k; |centers| may be smaller
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> centers;     // ascending point ids
  std::vector<std::size_t> assignment;  // per point: nearest center id, ties to lowest id
  double radius = 0.0;                  // max over points of distance to assigned center
  std::uint64_t work = 0;               // distance evaluations
  double wall_time_s = 0.0;
  // winning candidate threshold, for the radius-guessing solvers
  std::optional<double> threshold;
};

namespace detail {

class StopWatch {
 public:
  StopWatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Nearest-center assignment; scans centers ascending with strict improvement,
// so distance ties resolve to the lowest center id.
inline void assign_nearest(DistanceMeter& dist, ClusteringResult& res) {
  std::size_t n = dist.space().size();
  res.assignment.assign(n, res.centers.at(0));
  res.radius = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double best = dist(res.centers[0], p);
    for (std::size_t ci = 1; ci < res.centers.size(); ++ci) {
      double d = dist(res.centers[ci], p);
      if (d < best) {
        best = d;
        res.assignment[p] = res.centers[ci];
      }
    }
    if (best > res.radius) res.radius = best;
  }
}

struct GonzalezCore {
  std::vector<std::size_t> discovery;  // centers in the order chosen
  std::vector<double> radii;           // cover radius after 1, 2, ..., k centers
  std::vector<std::size_t> assignment;
  double radius = 0.0;
};

// Farthest-first traversal. Exactly n evaluations per chosen center; the
// cached center rows make the final nearest-assignment free.
inline GonzalezCore gonzalez_core(DistanceMeter& dist, std::size_t k, std::size_t start) {
  std::size_t n = dist.space().size();
  if (k < 1 || k > n) throw UsageError("gonzalez: need 1 <= k <= n");
  if (start >= n) throw UsageError("gonzalez: start point out of range");

  GonzalezCore out;
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> rows;
  rows.reserve(k);
  std::size_t next = start;
  for (std::size_t it = 0; it < k; ++it) {
    std::size_t c = next;
    out.discovery.push_back(c);
    rows.emplace_back(n);
    auto& row = rows.back();
    double far = 0.0;
    next = 0;
    for (std::size_t p = 0; p < n; ++p) {
      row[p] = dist(c, p);
      if (row[p] < mind[p]) mind[p] = row[p];
      if (mind[p] > far) {
        far = mind[p];
        next = p;
      }
    }
    out.radii.push_back(far);
    if (far == 0.0) break;  // only duplicates remain; more centers add nothing
  }
  out.radius = out.radii.back();

  std::vector<std::size_t> order(out.discovery.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.discovery[a] < out.discovery[b];
  });
  out.assignment.assign(n, out.discovery[order[0]]);
  for (std::size_t p = 0; p < n; ++p) {
    double best = rows[order[0]][p];
    for (std::size_t oi = 1; oi < order.size(); ++oi) {
      double d = rows[order[oi]][p];
      if (d < best) {
        best = d;
        out.assignment[p] = out.discovery[order[oi]];
      }
    }
  }
  return out;
}

}  // namespace detail

// Farthest-first traversal from a fixed start point. The radius equals the
// distance of the farthest point from the chosen centers.
inline ClusteringResult gonzalez(const MetricSpace& space, std::size_t k,
                                 std::size_t start = 0) {
  detail::StopWatch sw;
  DistanceMeter dist(space);
  auto core = detail::gonzalez_core(dist, k, start);
  ClusteringResult res;
  res.algo = "gonzalez";
  res.k = k;
  res.centers = core.discovery;
  std::sort(res.centers.begin(), res.centers.end());
  res.assignment = std::move(core.assignment);
  res.radius = core.radius;
  res.work = dist.evals();
  res.wall_time_s = sw.seconds();
  return res;
}

// Same traversal with a seeded-random start point.
inline ClusteringResult gonzalez_randomized(const MetricSpace& space, std::size_t k,
                                            std::uint64_t seed) {
  std::size_t n = space.size();
  if (n == 0) throw UsageError("empty space");
  std::size_t start = Rng::stream(seed, "order").below(n);
  ClusteringResult res = gonzalez(space, k, start);
  res.seed = seed;
  return res;
}

// Radius guessing over the sorted distinct pairwise distances: accept the
// first candidate whose squared-disk-graph MIS has at most k vertices.
inline ClusteringResult parametric_pruning(const MetricSpace& space, std::size_t k,
                                           const VisitOrder& order) {
  detail::StopWatch sw;
  std::size_t n = space.size();
  if (k < 1 || k > n) throw UsageError("parametric pruning: need 1 <= k <= n");
  if (order.perm.size() != n) throw UsageError("parametric pruning: bad visit order");
  DistanceMeter dist(space);

  ClusteringResult res;
  res.algo = "parametric";
  res.k = k;
  if (order.randomized) res.seed = order.seed;

  if (n == 1) {
    res.centers = {0};
    res.assignment = {0};
    res.threshold = 0.0;
    res.work = dist.evals();
    res.wall_time_s = sw.seconds();
    return res;
  }

  // A candidate below a quarter of the farthest-first radius can never admit
  // an independent set of size <= k in the squared graph, so skipping those
  // candidates cannot change which candidate wins.
  double floor_cand = detail::gonzalez_core(dist, k, 0).radius / 4.0;

  std::vector<double> matrix(n * n, 0.0);
  std::vector<double> cands;
  cands.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = dist(i, j);
      matrix[i * n + j] = matrix[j * n + i] = d;
      cands.push_back(d);
    }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  for (double cand : cands) {
    if (cand < floor_cand) continue;
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (matrix[i * n + j] <= cand) {
          g.adj[i].push_back(j);
          g.adj[j].push_back(i);
        }
    auto mis = greedy_mis(square(g), order);
    if (mis.size() <= k) {
      res.centers = std::move(mis);
      res.threshold = cand;
      // assignment from the cached matrix: no further evaluations
      res.assignment.assign(n, res.centers[0]);
      res.radius = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        double best = matrix[res.centers[0] * n + p];
        for (std::size_t ci = 1; ci < res.centers.size(); ++ci) {
          double d = matrix[res.centers[ci] * n + p];
          if (d < best) {
            best = d;
            res.assignment[p] = res.centers[ci];
          }
        }
        if (best > res.radius) res.radius = best;
      }
      res.work = dist.evals();
      res.wall_time_s = sw.seconds();
      return res;
    }
  }
  throw GuardError("parametric pruning: no candidate succeeded; broken invariant");
}

// Candidate schedule for the geometric radius search.
struct RadiusSchedule {
  double lower = 0.0;    // first candidate
  double growth = 0.0;   // 1 + epsilon
  double upper = 0.0;    // inclusive cap on candidates
  std::vector<double> candidates;

  static RadiusSchedule geometric(double lower, double growth, double upper) {
    if (!(growth > 1.0)) throw UsageError("radius schedule: growth must exceed 1");
    RadiusSchedule s;
    s.lower = lower;
    s.growth = growth;
    s.upper = upper;
    double r = lower;
    s.candidates.push_back(r);
    if (r > 0.0) {
      while (r * growth <= upper) {
        r *= growth;
        s.candidates.push_back(r);
      }
    }
    return s;
  }
};

// Geometric radius search seeded by the farthest-first radius: candidates
// (R0/2)(1+eps)^t capped at 2(1+eps)R0, each tried with a greedy index-order
// sweep that turns the first unmarked point into a center and marks everything
// within the candidate radius. The sweep aborts once it would need more than k
// centers. Work stays O(nk) per candidate.
inline ClusteringResult efficient_parametric_pruning(const MetricSpace& space,
                                                     std::size_t k, double epsilon) {
  detail::StopWatch sw;
  std::size_t n = space.size();
  if (k < 1 || k > n) throw UsageError("efficient pruning: need 1 <= k <= n");
  if (!(epsilon > 0.0)) throw UsageError("efficient pruning: epsilon must be positive");
  DistanceMeter dist(space);

  double r0 = detail::gonzalez_core(dist, k, 0).radius;
  auto schedule =
      RadiusSchedule::geometric(r0 / 2.0, 1.0 + epsilon, 2.0 * (1.0 + epsilon) * r0);

  ClusteringResult res;
  res.algo = "efficient";
  res.k = k;
  res.epsilon = epsilon;

  std::vector<char> marked(n);
  for (double cand : schedule.candidates) {
    std::fill(marked.begin(), marked.end(), char{0});
    std::vector<std::size_t> centers;
    bool overflow = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (marked[p]) continue;
      if (centers.size() == k) {
        overflow = true;  // a (k+1)-th center would be needed
        break;
      }
      centers.push_back(p);
      for (std::size_t q = p; q < n; ++q)
        if (!marked[q] && dist(p, q) <= cand) marked[q] = 1;
    }
    if (!overflow) {
      res.centers = std::move(centers);
      res.threshold = cand;
      detail::assign_nearest(dist, res);
      res.work = dist.evals();
      res.wall_time_s = sw.seconds();
      return res;
    }
  }
  // the cap is at least twice the optimal radius, where the sweep must succeed
  throw GuardError("efficient pruning: radius schedule exhausted; broken invariant");
}

// Exhaustive minimum over all k-subsets of centers; the lexicographically
// first optimal subset is returned. Guarded by the subset count.
inline ClusteringResult exact_kcenter(const MetricSpace& space, std::size_t k) {
  detail::StopWatch sw;
  std::size_t n = space.size();
  if (k < 1 || k > n) throw UsageError("exact solver: need 1 <= k <= n");
  constexpr std::uint64_t kGuard = 10'000'000;
  if (binomial_capped(n, k, kGuard) > kGuard)
    throw GuardError("exact solver: C(" + std::to_string(n) + "," + std::to_string(k) +
                     ") exceeds the 1e7 subset guard");
  DistanceMeter dist(space);

  std::vector<std::size_t> subset(k);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  std::vector<std::size_t> best_subset;
  double best = std::numeric_limits<double>::infinity();

  while (true) {
    // max-min distance for this subset, abandoned early at best
    double worst = 0.0;
    for (std::size_t p = 0; p < n && worst < best; ++p) {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t c : subset) {
        double d = dist(c, p);
        if (d < mn) mn = d;
      }
      if (mn > worst) worst = mn;
    }
    if (worst < best) {
      best = worst;
      best_subset = subset;
    }
    // next k-combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }

  ClusteringResult res;
  res.algo = "exact";
  res.k = k;
  res.centers = std::move(best_subset);
  detail::assign_nearest(dist, res);
  res.work = dist.evals();
  res.wall_time_s = sw.seconds();
  return res;
}

// Certificate that a result could have come from a farthest-first traversal:
// centers pairwise farther than the radius apart (no center lies in another
// center's cluster) and every point covered within the radius. Equivalently
// the centers are a maximal independent set of the disk graph at the radius.
inline bool is_gonzalez_consistent(const ClusteringResult& result,
                                   const MetricSpace& space) {
  const auto& c = result.centers;
  if (c.empty()) return false;
  double r = result.radius;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b)
      if (!(space.distance(c[a], c[b]) > r)) return false;
  for (std::size_t p = 0; p < space.size(); ++p) {
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t cc : c) mn = std::min(mn, space.distance(cc, p));
    if (mn > r) return false;
  }
  return true;
}

}  // namespace kcenter
