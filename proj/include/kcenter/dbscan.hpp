#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/graph.hpp"
#include "kcenter/metric.hpp"

namespace kcenter {

// A point is core when at least minpts other points lie within eps of it.
inline std::vector<char> core_flags(DistanceMeter& dist, double eps,
                                    std::size_t minpts) {
  if (!(eps > 0.0)) throw UsageError("dbscan: eps must be positive");
  if (minpts < 1) throw UsageError("dbscan: minpts must be at least 1");
  std::size_t n = dist.space().size();
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist(i, j) <= eps) {
        ++count[i];
        ++count[j];
      }
  std::vector<char> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = count[i] >= minpts;
  return core;
}

struct DbscanLabeling {
  std::vector<char> core;
  // -1 = noise; clusters numbered 0.. in order of their lowest core point id
  std::vector<long long> labels;
  std::size_t clusters = 0;
  std::uint64_t work = 0;
};

// Quadratic reference implementation: clusters are the connected components
// of the eps disk graph restricted to core points; a non-core point joins the
// cluster of its nearest core point within eps (ties to the lowest id),
// otherwise it is noise.
inline DbscanLabeling reference_dbscan(const MetricSpace& space, double eps,
                                       std::size_t minpts) {
  DistanceMeter dist(space);
  std::size_t n = space.size();
  DbscanLabeling out;
  out.core = core_flags(dist, eps, minpts);
  out.labels.assign(n, -1);

  std::vector<std::size_t> cores;
  for (std::size_t i = 0; i < n; ++i)
    if (out.core[i]) cores.push_back(i);

  Graph g(cores.size());
  for (std::size_t a = 0; a < cores.size(); ++a)
    for (std::size_t b = a + 1; b < cores.size(); ++b)
      if (dist(cores[a], cores[b]) <= eps) {
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
      }
  std::vector<std::size_t> comp = connected_components(g);
  for (std::size_t a = 0; a < cores.size(); ++a)
    out.labels[cores[a]] = static_cast<long long>(comp[a]);
  for (std::size_t c : comp) out.clusters = std::max(out.clusters, c + 1);
  if (cores.empty()) out.clusters = 0;

  for (std::size_t p = 0; p < n; ++p) {
    if (out.core[p]) continue;
    double best = std::numeric_limits<double>::infinity();
    long long label = -1;
    for (std::size_t a = 0; a < cores.size(); ++a) {
      double d = dist(cores[a], p);
      if (d <= eps && d < best) {
        best = d;
        label = out.labels[cores[a]];
      }
    }
    out.labels[p] = label;
  }
  out.work = dist.evals();
  return out;
}

}  // namespace kcenter
