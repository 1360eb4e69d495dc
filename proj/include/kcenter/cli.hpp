#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcenter/common.hpp"
#include "kcenter/coreset.hpp"
#include "kcenter/dbscan.hpp"
#include "kcenter/distributed.hpp"
#include "kcenter/io.hpp"
#include "kcenter/metric.hpp"
#include "kcenter/solvers.hpp"

namespace kcenter {

using ordered_json = nlohmann::ordered_json;

inline ordered_json result_json(const ClusteringResult& r) {
  ordered_json j;
  j["algo"] = r.algo;
  j["k"] = r.k;
  if (r.epsilon) j["epsilon"] = *r.epsilon;
  if (r.seed) j["seed"] = *r.seed;
  j["radius"] = r.radius;
  j["centers"] = r.centers;
  j["work"] = r.work;
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

inline ordered_json trace_report(const SimulationTrace& t) {
  ordered_json j;
  j["rounds"] = t.rounds;
  j["items_per_round"] = t.items_per_round;
  j["peak_items_per_machine"] = t.peak_items_per_machine;
  j["total_work"] = t.total_work;
  return j;
}

namespace cli_detail {

struct Cfg {
  std::string input, matrix, gen, out, format;
  std::string algo, pipeline, partition = "arbitrary", local_algo = "gonzalez";
  std::size_t k = 1, k_min = 0, k_max = 0, L = 1, m = 0, minpts = 3, start = 0;
  std::size_t reps = 10;
  int max_R = 3;
  double epsilon = 0.0, eps = 0.0;
  bool epsilon_set = false, mapreduce = false;
  std::uint64_t seed = 0;
};

inline MetricSpace load_space(const Cfg& cfg) {
  int sources = (!cfg.input.empty()) + (!cfg.matrix.empty()) + (!cfg.gen.empty());
  if (sources != 1)
    throw UsageError("exactly one of --input, --matrix, --gen must be given");
  if (!cfg.input.empty())
    return MetricSpace::euclidean(read_points_csv_file(cfg.input));
  if (!cfg.matrix.empty()) {
    MetricSpace s = read_matrix_file(cfg.matrix);
    MetricValidation v = validate_metric(s);
    if (!v.ok)
      throw UsageError("matrix file " + cfg.matrix + ": " + v.message + " at (" +
                       std::to_string(v.wi) + "," + std::to_string(v.wvia) + "," +
                       std::to_string(v.wj) + ")");
    return s;
  }
  return MetricSpace::euclidean(generate(parse_generator_spec(cfg.gen, cfg.seed)));
}

inline void deliver(const std::string& text, const Cfg& cfg, std::ostream& out) {
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!cfg.out.empty()) {
    std::string file = text;
    if (file.empty() || file.back() != '\n') file.push_back('\n');
    write_text_file(cfg.out, file);
  }
}

inline void require_epsilon(const Cfg& cfg, const char* who) {
  if (!cfg.epsilon_set)
    throw UsageError(std::string(who) + " needs --epsilon");
}

inline int do_solve(const Cfg& cfg, std::ostream& out) {
  MetricSpace space = load_space(cfg);
  ClusteringResult res;
  if (cfg.algo == "gonzalez") {
    res = gonzalez(space, cfg.k, cfg.start);
  } else if (cfg.algo == "parametric") {
    res = parametric_pruning(space, cfg.k, VisitOrder::by_index(space.size()));
  } else if (cfg.algo == "efficient") {
    require_epsilon(cfg, "--algo efficient");
    res = efficient_parametric_pruning(space, cfg.k, cfg.epsilon);
  } else if (cfg.algo == "exact") {
    res = exact_kcenter(space, cfg.k);
  } else {
    throw UsageError("unknown --algo '" + cfg.algo + "'");
  }
  deliver(result_json(res).dump(2), cfg, out);
  return 0;
}

inline int do_simulate(const Cfg& cfg, std::ostream& out) {
  MetricSpace space = load_space(cfg);
  Partition part = make_partition(space, cfg.L, cfg.partition, cfg.m, cfg.seed);
  ordered_json j;
  if (cfg.pipeline == "composable" || cfg.pipeline == "fixedk") {
    require_epsilon(cfg, ("--pipeline " + cfg.pipeline).c_str());
    auto [res, trace] = cfg.pipeline == "composable"
                            ? composable_kcenter(space, part, cfg.k, cfg.epsilon)
                            : fixed_k_kcenter(space, part, cfg.k, cfg.epsilon);
    j["result"] = result_json(res);
    j["trace"] = trace_report(trace);
  } else if (cfg.pipeline == "generalized") {
    auto [res, trace] = generalized_kcenter(space, part, cfg.k, cfg.local_algo);
    j["result"] = result_json(res);
    j["trace"] = trace_report(trace);
  } else if (cfg.pipeline == "dbscan") {
    if (!(cfg.eps > 0.0)) throw UsageError("--pipeline dbscan needs --eps");
    auto [res, trace] = dbscan_coreset(space, part, cfg.eps, cfg.minpts);
    ordered_json r;
    r["pipeline"] = "dbscan";
    r["eps"] = res.eps;
    r["minpts"] = res.minpts;
    r["clusters"] = res.clusters;
    r["coreset"] = res.coreset;
    r["machine_of"] = res.machine_of;
    r["component_labels"] = res.component_labels;
    r["labels"] = res.labels;
    j["result"] = r;
    j["trace"] = trace_report(trace);
  } else {
    throw UsageError("unknown --pipeline '" + cfg.pipeline + "'");
  }
  deliver(j.dump(2), cfg, out);
  return 0;
}

struct CompareRun {
  std::size_t k;
  std::string algo;
  std::uint64_t seed;
  double radius;
  std::uint64_t work;
  double wall_time_s;
};

inline int do_compare(const Cfg& cfg, std::ostream& out) {
  MetricSpace space = load_space(cfg);
  if (cfg.reps < 1) throw UsageError("--reps must be at least 1");
  std::size_t klo = cfg.k_min ? cfg.k_min : cfg.k;
  std::size_t khi = cfg.k_max ? cfg.k_max : klo;
  if (klo < 1 || khi < klo) throw UsageError("bad k range");

  std::vector<std::string> algos = {"gonzalez", "parametric"};
  if (cfg.mapreduce) {
    algos.push_back("composable");
    algos.push_back("generalized");
  }

  std::vector<CompareRun> runs;
  for (std::size_t k = klo; k <= khi; ++k) {
    for (const auto& algo : algos) {
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        std::uint64_t s = cfg.seed + rep;
        ClusteringResult res;
        if (algo == "gonzalez") {
          res = gonzalez_randomized(space, k, s);
        } else if (algo == "parametric") {
          res = parametric_pruning(space, k, VisitOrder::shuffled(space.size(), s));
        } else {
          Partition part = make_partition(space, cfg.L, cfg.partition, cfg.m, s);
          double eps = cfg.epsilon_set ? cfg.epsilon : 0.5;
          auto [r, t] = algo == "composable"
                            ? composable_kcenter(space, part, k, eps)
                            : generalized_kcenter(space, part, k, cfg.local_algo);
          res = r;
          res.seed = s;
        }
        runs.push_back({k, algo, s, res.radius, res.work, res.wall_time_s});
      }
    }
  }
  std::sort(runs.begin(), runs.end(), [](const CompareRun& a, const CompareRun& b) {
    return std::tie(a.k, a.algo, a.seed) < std::tie(b.k, b.algo, b.seed);
  });

  struct Summary {
    double mean, mn, mx;
  };
  std::map<std::pair<std::size_t, std::string>, Summary> summary;
  for (std::size_t k = klo; k <= khi; ++k)
    for (const auto& algo : algos) {
      double sum = 0.0, mn = std::numeric_limits<double>::infinity(), mx = 0.0;
      std::size_t cnt = 0;
      for (const auto& r : runs)
        if (r.k == k && r.algo == algo) {
          sum += r.radius;
          mn = std::min(mn, r.radius);
          mx = std::max(mx, r.radius);
          ++cnt;
        }
      summary[{k, algo}] = {sum / cnt, mn, mx};
    }

  std::vector<std::string> sorted_algos = algos;
  std::sort(sorted_algos.begin(), sorted_algos.end());

  if (cfg.format == "csv") {
    std::ostringstream csv;
    csv << "k,algo,mean_radius,min_radius,max_radius\n";
    for (std::size_t k = klo; k <= khi; ++k)
      for (const auto& algo : sorted_algos) {
        const Summary& s = summary[{k, algo}];
        csv << k << ',' << algo << ',' << format_double(s.mean) << ','
            << format_double(s.mn) << ',' << format_double(s.mx) << '\n';
      }
    deliver(csv.str(), cfg, out);
    return 0;
  }

  ordered_json j;
  j["runs"] = ordered_json::array();
  for (const auto& r : runs) {
    ordered_json row;
    row["k"] = r.k;
    row["algo"] = r.algo;
    row["seed"] = r.seed;
    row["radius"] = r.radius;
    row["work"] = r.work;
    row["wall_time_s"] = r.wall_time_s;
    j["runs"].push_back(row);
  }
  j["summary"] = ordered_json::array();
  for (std::size_t k = klo; k <= khi; ++k)
    for (const auto& algo : sorted_algos) {
      const Summary& s = summary[{k, algo}];
      ordered_json row;
      row["k"] = k;
      row["algo"] = algo;
      row["mean_radius"] = s.mean;
      row["min_radius"] = s.mn;
      row["max_radius"] = s.mx;
      j["summary"].push_back(row);
    }
  ordered_json ratios;
  for (const auto& algo : sorted_algos) {
    if (algo == "gonzalez") continue;
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = klo; k <= khi; ++k) {
      double base = summary[{k, "gonzalez"}].mean;
      if (base > 0.0) {
        acc += summary[{k, algo}].mean / base;
        ++cnt;
      }
    }
    if (cnt) ratios[algo] = acc / cnt;
  }
  j["mean_radius_ratio_vs_gonzalez"] = ratios;
  deliver(j.dump(2), cfg, out);
  return 0;
}

inline int do_tradeoff(const Cfg& cfg, std::ostream& out) {
  MetricSpace space = load_space(cfg);
  auto rows = tradeoff_table(space, cfg.k, cfg.max_R,
                             VisitOrder::by_index(space.size()), cfg.start);
  if (cfg.format == "json") {
    ordered_json j;
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["R"] = r.R;
      row["size"] = r.size;
      row["cover_radius"] = r.cover_radius;
      j["rows"].push_back(row);
    }
    deliver(j.dump(2), cfg, out);
    return 0;
  }
  std::ostringstream csv;
  csv << "R,size,cover_radius\n";
  for (const auto& r : rows)
    csv << r.R << ',' << r.size << ',' << format_double(r.cover_radius) << '\n';
  deliver(csv.str(), cfg, out);
  return 0;
}

inline int do_gen(const Cfg& cfg, std::ostream& out) {
  if (cfg.gen.empty()) throw UsageError("gen needs --gen SPEC");
  PointSet ps = generate(parse_generator_spec(cfg.gen, cfg.seed));
  std::ostringstream csv;
  write_points_csv(csv, ps);
  deliver(csv.str(), cfg, out);
  return 0;
}

}  // namespace cli_detail

// Entry point shared by the binary and the tests. Args exclude the program
// name. Exit codes: 0 success, 1 runtime guard tripped, 2 usage.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using cli_detail::Cfg;
  Cfg cfg;
  CLI::App app{"k-center clustering toolkit: solvers, coresets, simulated MapReduce"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* c) {
    c->add_option("--input", cfg.input, "points CSV file");
    c->add_option("--matrix", cfg.matrix, "explicit distance matrix file");
    c->add_option("--gen", cfg.gen,
                  "generator spec: box:N[:DIM] | gauss:N[:DIM[:CL[:SPREAD]]] | "
                  "line:N[:SPACING] | cover:DEPTH[:RADIUS]");
    c->add_option("--seed", cfg.seed, "seed for generation and randomized runs");
    c->add_option("--out", cfg.out, "also write the report to this file");
  };

  CLI::App* solve = app.add_subcommand("solve", "run one solver, print its record");
  add_input(solve);
  solve->add_option("--algo", cfg.algo, "gonzalez | parametric | efficient | exact")
      ->required();
  solve->add_option("--k", cfg.k, "number of centers")->required();
  solve->add_option("--epsilon", cfg.epsilon, "accuracy knob for efficient")
      ->each([&](const std::string&) { cfg.epsilon_set = true; });
  solve->add_option("--start", cfg.start, "start point for gonzalez");
  solve->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  CLI::App* sim = app.add_subcommand("simulate", "run a MapReduce pipeline with trace");
  add_input(sim);
  sim->add_option("--pipeline", cfg.pipeline, "composable | generalized | fixedk | dbscan")
      ->required();
  sim->add_option("--k", cfg.k, "number of centers");
  sim->add_option("--epsilon", cfg.epsilon, "accuracy knob")
      ->each([&](const std::string&) { cfg.epsilon_set = true; });
  sim->add_option("--L", cfg.L, "machine count");
  sim->add_option("--m", cfg.m, "per-machine capacity, 0 = unbounded");
  sim->add_option("--partition", cfg.partition)
      ->check(CLI::IsMember({"arbitrary", "random"}));
  sim->add_option("--local-algo", cfg.local_algo, "generalized pipeline local solver")
      ->check(CLI::IsMember({"gonzalez", "parametric"}));
  sim->add_option("--eps", cfg.eps, "dbscan radius");
  sim->add_option("--minpts", cfg.minpts, "dbscan core threshold");
  sim->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  CLI::App* cmp = app.add_subcommand("compare", "randomized algorithm comparison");
  add_input(cmp);
  cmp->add_option("--k", cfg.k, "single k");
  cmp->add_option("--k-min", cfg.k_min, "k range start");
  cmp->add_option("--k-max", cfg.k_max, "k range end");
  cmp->add_option("--reps", cfg.reps, "repetitions per (k, algo)");
  cmp->add_flag("--mapreduce", cfg.mapreduce, "also compare the pipelines");
  cmp->add_option("--epsilon", cfg.epsilon, "pipeline accuracy knob")
      ->each([&](const std::string&) { cfg.epsilon_set = true; });
  cmp->add_option("--L", cfg.L, "machine count for --mapreduce");
  cmp->add_option("--m", cfg.m, "per-machine capacity, 0 = unbounded");
  cmp->add_option("--partition", cfg.partition)
      ->check(CLI::IsMember({"arbitrary", "random"}));
  cmp->add_option("--local-algo", cfg.local_algo)
      ->check(CLI::IsMember({"gonzalez", "parametric"}));
  cmp->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* tr = app.add_subcommand("tradeoff", "coreset size vs radius table");
  add_input(tr);
  tr->add_option("--k", cfg.k, "number of centers")->required();
  tr->add_option("--max-R", cfg.max_R, "largest halving depth");
  tr->add_option("--start", cfg.start, "start point for the base radius");
  tr->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* gen = app.add_subcommand("gen", "emit a generated point set as CSV");
  add_input(gen);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (cfg.format.empty()) cfg.format = (*tr || *cmp) ? "csv" : "json";
    if (*solve) return cli_detail::do_solve(cfg, out);
    if (*sim) return cli_detail::do_simulate(cfg, out);
    if (*cmp) return cli_detail::do_compare(cfg, out);
    if (*tr) return cli_detail::do_tradeoff(cfg, out);
    if (*gen) return cli_detail::do_gen(cfg, out);
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kcenter
