#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/coreset.hpp"
#include "kcenter/dbscan.hpp"
#include "kcenter/graph.hpp"
#include "kcenter/metric.hpp"
#include "kcenter/solvers.hpp"

namespace kcenter {

// Disjoint machine-local index sets covering the whole space. Machine 0 is
// the designated aggregator in every pipeline.
struct Partition {
  std::vector<std::vector<std::size_t>> machines;  // ascending ids per machine
  std::string strategy;                            // "arbitrary" or "random"
  std::optional<std::uint64_t> seed;
  std::size_t m = 0;  // per-machine capacity

  std::size_t count() const { return machines.size(); }
};

// arbitrary = contiguous index blocks of near-equal size; random = seeded
// shuffle dealt into the same block shapes. Capacities are item counts.
inline Partition make_partition(const MetricSpace& space, std::size_t L,
                                const std::string& strategy, std::size_t m = 0,
                                std::uint64_t seed = 0) {
  std::size_t n = space.size();
  if (L < 1) throw UsageError("partition: need at least one machine");
  if (m == 0) m = n;  // unconstrained
  if (L * m < n)
    throw UsageError("partition: capacity infeasible, L*m = " + std::to_string(L * m) +
                     " < n = " + std::to_string(n));

  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  Partition part;
  part.strategy = strategy;
  part.m = m;
  if (strategy == "random") {
    part.seed = seed;
    Rng::stream(seed, "partition").shuffle(ids);
  } else if (strategy != "arbitrary") {
    throw UsageError("partition: unknown strategy '" + strategy + "'");
  }
  part.machines.resize(L);
  for (std::size_t i = 0; i < L; ++i) {
    std::size_t lo = i * n / L, hi = (i + 1) * n / L;
    part.machines[i].assign(ids.begin() + lo, ids.begin() + hi);
    std::sort(part.machines[i].begin(), part.machines[i].end());
  }
  return part;
}

struct SimulationTrace {
  std::size_t rounds = 0;
  // items crossing machine boundaries in each round
  std::vector<std::uint64_t> items_per_round;
  // peak resident items per machine across all rounds
  std::vector<std::uint64_t> peak_items_per_machine;
  std::uint64_t total_work = 0;
};

namespace detail {

// Net over the metered space covering every point within cover_radius, built
// as the index-order MIS of the squared disk graph at half that radius.
// Zero radius degenerates to one representative per duplicate class.
inline std::vector<std::size_t> local_net(DistanceMeter& dist, double cover_radius) {
  if (cover_radius == 0.0) return distinct_representatives(dist);
  Graph g = build_disk_graph(dist, cover_radius / 2.0);
  return greedy_mis(square(g), VisitOrder::by_index(dist.space().size()));
}

// Local coresets shipped to the aggregator: global ids in machine order.
struct LocalCoresets {
  std::vector<std::size_t> union_ids;   // ascending machine, ascending id within
  std::vector<std::size_t> machine_of;  // aligned with union_ids
  std::vector<std::uint64_t> local_items;
  std::uint64_t work = 0;
};

// Runs the per-machine coreset phase of the composable pipelines: k-center
// locally, then a net at epsilon times half the local radius.
inline LocalCoresets composable_local_phase(const MetricSpace& space,
                                            const Partition& part, std::size_t k,
                                            double epsilon) {
  LocalCoresets out;
  for (std::size_t mi = 0; mi < part.count(); ++mi) {
    const auto& ids = part.machines[mi];
    out.local_items.push_back(0);
    if (ids.empty()) continue;
    MetricSpace sub = subspace(space, ids);
    DistanceMeter dist(sub);
    std::size_t ki = std::min(k, ids.size());
    double ri = gonzalez_core(dist, ki, 0).radius;
    std::vector<std::size_t> net = local_net(dist, epsilon * ri / 2.0);
    out.local_items.back() = net.size();
    for (std::size_t pos : net) {
      out.union_ids.push_back(ids[pos]);
      out.machine_of.push_back(mi);
    }
    out.work += dist.evals();
  }
  return out;
}

// Nearest-center assignment over the full space for globally indexed centers.
inline void full_assignment(const MetricSpace& space, ClusteringResult& res,
                            std::uint64_t& work) {
  DistanceMeter dist(space);
  assign_nearest(dist, res);
  work += dist.evals();
}

inline std::vector<std::uint64_t> machine_peaks(const Partition& part,
                                                std::uint64_t aggregated,
                                                std::uint64_t broadcast) {
  std::vector<std::uint64_t> peaks;
  for (std::size_t mi = 0; mi < part.count(); ++mi) {
    std::uint64_t resident = part.machines[mi].size();
    peaks.push_back(resident + (mi == 0 ? aggregated : broadcast));
  }
  return peaks;
}

}  // namespace detail

// Three-round pipeline: per-machine nets at epsilon times half the local
// k-center radius, union on machine 0, one k-center pass over the union.
// The returned radius is measured over the whole space.
inline std::pair<ClusteringResult, SimulationTrace> composable_kcenter(
    const MetricSpace& space, const Partition& part, std::size_t k, double epsilon) {
  detail::StopWatch sw;
  if (k < 1) throw UsageError("composable pipeline: need k >= 1");
  if (!(epsilon > 0.0)) throw UsageError("composable pipeline: epsilon must be positive");

  auto local = detail::composable_local_phase(space, part, k, epsilon);
  std::uint64_t work = local.work;

  MetricSpace u = subspace(space, local.union_ids);
  DistanceMeter udist(u);
  auto core = detail::gonzalez_core(udist, std::min(k, local.union_ids.size()), 0);
  work += udist.evals();

  ClusteringResult res;
  res.algo = "composable";
  res.k = k;
  res.epsilon = epsilon;
  for (std::size_t pos : core.discovery) res.centers.push_back(local.union_ids[pos]);
  std::sort(res.centers.begin(), res.centers.end());
  detail::full_assignment(space, res, work);
  res.work = work;
  res.wall_time_s = sw.seconds();

  SimulationTrace trace;
  trace.rounds = 3;
  std::uint64_t shipped =
      std::accumulate(local.local_items.begin(), local.local_items.end(), std::uint64_t{0});
  trace.items_per_round = {0, shipped, res.centers.size() * part.count()};
  trace.peak_items_per_machine = detail::machine_peaks(part, shipped, res.centers.size());
  trace.total_work = work;
  return {std::move(res), std::move(trace)};
}

// Three-round pipeline shipping exactly the k local centers of each machine.
inline std::pair<ClusteringResult, SimulationTrace> generalized_kcenter(
    const MetricSpace& space, const Partition& part, std::size_t k,
    const std::string& local_algo = "gonzalez") {
  detail::StopWatch sw;
  if (k < 1) throw UsageError("generalized pipeline: need k >= 1");
  if (local_algo != "gonzalez" && local_algo != "parametric")
    throw UsageError("generalized pipeline: local algorithm must be gonzalez or parametric");

  std::uint64_t work = 0;
  std::vector<std::size_t> union_ids;
  std::vector<std::uint64_t> local_items;
  for (const auto& ids : part.machines) {
    local_items.push_back(0);
    if (ids.empty()) continue;
    MetricSpace sub = subspace(space, ids);
    std::size_t ki = std::min(k, ids.size());
    ClusteringResult lr =
        local_algo == "gonzalez"
            ? gonzalez(sub, ki)
            : parametric_pruning(sub, ki, VisitOrder::by_index(ids.size()));
    work += lr.work;
    local_items.back() = lr.centers.size();
    for (std::size_t pos : lr.centers) union_ids.push_back(ids[pos]);
  }

  MetricSpace u = subspace(space, union_ids);
  DistanceMeter udist(u);
  auto core = detail::gonzalez_core(udist, std::min(k, union_ids.size()), 0);
  work += udist.evals();

  ClusteringResult res;
  res.algo = "generalized";
  res.k = k;
  for (std::size_t pos : core.discovery) res.centers.push_back(union_ids[pos]);
  std::sort(res.centers.begin(), res.centers.end());
  detail::full_assignment(space, res, work);
  res.work = work;
  res.wall_time_s = sw.seconds();

  SimulationTrace trace;
  trace.rounds = 3;
  std::uint64_t shipped =
      std::accumulate(local_items.begin(), local_items.end(), std::uint64_t{0});
  trace.items_per_round = {0, shipped, res.centers.size() * part.count()};
  trace.peak_items_per_machine = detail::machine_peaks(part, shipped, res.centers.size());
  trace.total_work = work;
  return {std::move(res), std::move(trace)};
}

// Composable local nets, then an epsilon coreset of the union, then the
// exhaustive solver over that coreset. Guarded by the subset count.
inline std::pair<ClusteringResult, SimulationTrace> fixed_k_kcenter(
    const MetricSpace& space, const Partition& part, std::size_t k, double epsilon) {
  detail::StopWatch sw;
  if (k < 1) throw UsageError("fixed-k pipeline: need k >= 1");
  if (!(epsilon > 0.0) || epsilon > 2.0)
    throw UsageError("fixed-k pipeline: epsilon must lie in (0, 2]");

  auto local = detail::composable_local_phase(space, part, k, epsilon);
  std::uint64_t work = local.work;

  MetricSpace u = subspace(space, local.union_ids);
  CoresetResult cs = epsilon_coreset(u, std::min(k, local.union_ids.size()), epsilon,
                                     VisitOrder::by_index(local.union_ids.size()));
  work += cs.work;
  std::vector<std::size_t> refined;  // global ids of the refined coreset
  for (std::size_t pos : cs.subset) refined.push_back(local.union_ids[pos]);

  constexpr std::uint64_t kGuard = 10'000'000;
  std::size_t kc = std::min(k, refined.size());
  if (binomial_capped(refined.size(), kc, kGuard) > kGuard)
    throw GuardError("fixed-k pipeline: C(" + std::to_string(refined.size()) + "," +
                     std::to_string(kc) + ") exceeds the 1e7 subset guard");
  MetricSpace rc = subspace(space, refined);
  ClusteringResult ex = exact_kcenter(rc, kc);
  work += ex.work;

  ClusteringResult res;
  res.algo = "fixedk";
  res.k = k;
  res.epsilon = epsilon;
  for (std::size_t pos : ex.centers) res.centers.push_back(refined[pos]);
  std::sort(res.centers.begin(), res.centers.end());
  detail::full_assignment(space, res, work);
  res.work = work;
  res.wall_time_s = sw.seconds();

  SimulationTrace trace;
  trace.rounds = 3;
  std::uint64_t shipped =
      std::accumulate(local.local_items.begin(), local.local_items.end(), std::uint64_t{0});
  trace.items_per_round = {0, shipped, res.centers.size() * part.count()};
  trace.peak_items_per_machine = detail::machine_peaks(part, shipped, res.centers.size());
  trace.total_work = work;
  return {std::move(res), std::move(trace)};
}

struct DbscanCoresetResult {
  std::vector<std::size_t> coreset;     // global ids, machine order
  std::vector<std::size_t> machine_of;  // aligned with coreset
  std::vector<long long> component_labels;  // per coreset point
  std::vector<long long> labels;            // per point; -1 = noise
  double eps = 0.0;
  std::size_t minpts = 0;
  std::size_t clusters = 0;
};

// Four-round pipeline: core identification over the full space, per-machine
// nets over local core points at eps/2, connected components of the union at
// eps, label broadcast. Core points always land within eps/2 of the coreset,
// so component labels transfer exactly.
inline std::pair<DbscanCoresetResult, SimulationTrace> dbscan_coreset(
    const MetricSpace& space, const Partition& part, double eps, std::size_t minpts) {
  std::size_t n = space.size();
  DistanceMeter cdist(space);
  std::vector<char> core = core_flags(cdist, eps, minpts);  // validates eps, minpts
  std::uint64_t work = cdist.evals();

  DbscanCoresetResult res;
  res.eps = eps;
  res.minpts = minpts;
  res.labels.assign(n, -1);

  std::vector<std::uint64_t> local_items;
  for (std::size_t mi = 0; mi < part.count(); ++mi) {
    local_items.push_back(0);
    std::vector<std::size_t> cores_here;
    for (std::size_t id : part.machines[mi])
      if (core[id]) cores_here.push_back(id);
    if (cores_here.empty()) continue;
    MetricSpace sub = subspace(space, cores_here);
    DistanceMeter dist(sub);
    std::vector<std::size_t> net = detail::local_net(dist, eps / 2.0);
    work += dist.evals();
    local_items.back() = net.size();
    for (std::size_t pos : net) {
      res.coreset.push_back(cores_here[pos]);
      res.machine_of.push_back(mi);
    }
  }

  if (res.coreset.empty()) {
    SimulationTrace empty_trace;
    empty_trace.rounds = 4;
    empty_trace.items_per_round = {0, 0, 0, 0};
    empty_trace.peak_items_per_machine = detail::machine_peaks(part, 0, 0);
    empty_trace.total_work = work;
    return {std::move(res), std::move(empty_trace)};
  }

  // components of the union coreset at threshold eps, labeled in order of
  // the lowest global id they contain
  MetricSpace u = subspace(space, res.coreset);
  DistanceMeter udist(u);
  Graph g = build_disk_graph(udist, eps);
  work += udist.evals();
  std::vector<std::size_t> comp = connected_components(g);
  std::vector<long long> canon(comp.size(), -1);
  {
    std::vector<std::size_t> order(res.coreset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return res.coreset[a] < res.coreset[b];
    });
    long long next = 0;
    std::vector<long long> remap(comp.size(), -1);
    for (std::size_t pos : order)
      if (remap[comp[pos]] < 0) remap[comp[pos]] = next++;
    for (std::size_t i = 0; i < comp.size(); ++i) canon[i] = remap[comp[i]];
    res.clusters = static_cast<std::size_t>(next);
  }
  res.component_labels = canon;

  // broadcast: every point takes the label of its nearest coreset point
  // within eps (ties to the lowest global id); core points always have one
  DistanceMeter bdist(space);
  std::vector<std::size_t> order(res.coreset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return res.coreset[a] < res.coreset[b];
  });
  for (std::size_t p = 0; p < n; ++p) {
    double best = std::numeric_limits<double>::infinity();
    long long label = -1;
    for (std::size_t pos : order) {
      double d = bdist(res.coreset[pos], p);
      if (d <= eps && d < best) {
        best = d;
        label = res.component_labels[pos];
      }
    }
    res.labels[p] = label;
  }
  work += bdist.evals();

  SimulationTrace trace;
  trace.rounds = 4;
  std::uint64_t shipped =
      std::accumulate(local_items.begin(), local_items.end(), std::uint64_t{0});
  trace.items_per_round = {0, shipped, 0, res.coreset.size() * part.count()};
  trace.peak_items_per_machine =
      detail::machine_peaks(part, shipped, res.coreset.size());
  trace.total_work = work;
  return {std::move(res), std::move(trace)};
}

}  // namespace kcenter
