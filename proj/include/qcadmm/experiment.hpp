#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qcadmm/baselines.hpp"
#include "qcadmm/consensus.hpp"
#include "qcadmm/graph.hpp"
#include "qcadmm/metrics.hpp"
#include "qcadmm/rng.hpp"

namespace qcadmm {

enum class Algorithm { cadmm, pq, dq, pqdq, gossip, classical };
enum class GraphFamily { random_connected, star, complete };
enum class ExperimentKind {
  trace,
  sweep_edges,
  sweep_nodes,
  sweep_avg_degree,
  delta_sweep,
  cycle_count
};

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::cadmm: return "cadmm";
    case Algorithm::pq: return "pq";
    case Algorithm::dq: return "dq";
    case Algorithm::pqdq: return "pqdq";
    case Algorithm::gossip: return "gossip";
    case Algorithm::classical: return "classical";
  }
  return "?";
}

inline const char* to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::random_connected: return "random";
    case GraphFamily::star: return "star";
    case GraphFamily::complete: return "complete";
  }
  return "?";
}

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::trace: return "trace";
    case ExperimentKind::sweep_edges: return "sweep_edges";
    case ExperimentKind::sweep_nodes: return "sweep_nodes";
    case ExperimentKind::sweep_avg_degree: return "sweep_avg_degree";
    case ExperimentKind::delta_sweep: return "delta_sweep";
    case ExperimentKind::cycle_count: return "cycle_count";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "cadmm") return Algorithm::cadmm;
  if (s == "pq") return Algorithm::pq;
  if (s == "dq") return Algorithm::dq;
  if (s == "pqdq") return Algorithm::pqdq;
  if (s == "gossip") return Algorithm::gossip;
  if (s == "classical") return Algorithm::classical;
  throw std::invalid_argument("unknown algorithm: " + s);
}

struct GridPoint {
  int n = 2;
  long e = 1;
  double delta = 1.0;
  GraphFamily family = GraphFamily::random_connected;
  bool operator==(const GridPoint&) const = default;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::sweep_edges;
  std::vector<Algorithm> algorithms;
  std::vector<GridPoint> points;
  int trials = 100;
  std::uint64_t master_seed = 1;
  double rho = 1.0;
  long max_iter = 100000;
  int threads = 1;
};

struct ExperimentRow {
  GridPoint point;
  Algorithm algorithm = Algorithm::dq;
  int trials = 0;
  long converged = 0;
  long cyclic = 0;
  long capped = 0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double mean_time = 0.0;           // k0 for ADMM variants, stable-window start
                                    // for baselines, step count for pq
  double mean_time_adjusted = 0.0;  // gossip: divided by edge count
  double bound = 0.0;
  long within_bound = 0;

  bool operator==(const ExperimentRow&) const = default;
};

namespace detail {

struct TrialRecord {
  int outcome = 2;  // 0 converged, 1 cyclic, 2 capped
  double error = 0.0;
  double time = 0.0;
  double time_adjusted = 0.0;
  bool within_bound = false;
};

inline Graph make_graph(const GridPoint& p, std::uint64_t seed) {
  switch (p.family) {
    case GraphFamily::star: return star(p.n);
    case GraphFamily::complete: return complete(p.n);
    case GraphFamily::random_connected: return gen_random_connected(p.n, p.e, seed);
  }
  throw std::invalid_argument("unknown graph family");
}

inline TrialRecord run_trial_algorithm(Algorithm algo, const Graph& g, const Vec& r,
                                       const ExperimentSpec& spec, const GridPoint& p,
                                       std::uint64_t algo_seed) {
  TrialRecord rec;
  RunConfig cfg;
  cfg.r = r;
  cfg.rho = spec.rho;
  cfg.delta = p.delta;
  cfg.max_iter = spec.max_iter;
  cfg.seed = algo_seed;
  const double bound = error_bound(spec.rho, g.edge_count(), g.n(), p.delta);

  switch (algo) {
    case Algorithm::cadmm: {
      CadmmRun run = run_cadmm(g, cfg);
      rec.outcome = run.converged_at >= 0 ? 0 : 2;
      rec.error = run.errors.back();
      rec.time = run.converged_at >= 0 ? static_cast<double>(run.converged_at)
                                       : static_cast<double>(spec.max_iter);
      rec.time_adjusted = rec.time;
      rec.within_bound = rec.error <= bound + 1e-9;
      break;
    }
    case Algorithm::pq: {
      // no settling point exists; run the two-stage stage-1 horizon
      const long steps = std::min(spec.max_iter, 2 * pqdq_stage1_k(g.n(), p.delta, spec.rho));
      PqTrace tr = run_pq(g, cfg, steps);
      rec.outcome = 2;
      rec.error = tr.errors.back();
      rec.time = static_cast<double>(steps);
      rec.time_adjusted = rec.time;
      rec.within_bound = rec.error <= bound + 1e-9;
      break;
    }
    case Algorithm::dq: {
      ConsensusState init;
      init.x.assign(g.n(), 0.0);
      init.alpha.assign(g.n(), 0.0);
      RunResult res = run_dq(init, g, cfg);
      rec.outcome = res.outcome == Outcome::converged ? 0
                    : res.outcome == Outcome::cyclic  ? 1
                                                      : 2;
      rec.error = res.consensus_error;
      rec.time = static_cast<double>(res.k0);
      rec.time_adjusted = rec.time;
      rec.within_bound = res.within_bound;
      break;
    }
    case Algorithm::pqdq: {
      RunResult res = run_pqdq(g, cfg);
      rec.outcome = res.outcome == Outcome::converged ? 0
                    : res.outcome == Outcome::cyclic  ? 1
                                                      : 2;
      rec.error = res.consensus_error;
      rec.time = static_cast<double>(res.k0);  // 2K + stage-2 first hit
      rec.time_adjusted = rec.time;
      rec.within_bound = res.within_bound;
      break;
    }
    case Algorithm::gossip:
    case Algorithm::classical: {
      RngStream rng(algo_seed);
      BaselineRun run = run_baseline(
          algo == Algorithm::gossip ? BaselineKind::gossip : BaselineKind::classical, r, g,
          p.delta, spec.max_iter, rng);
      rec.outcome = run.converged ? 0 : 2;
      rec.error = run.consensus_error;
      rec.time = static_cast<double>(run.k0);
      rec.time_adjusted = algo == Algorithm::gossip
                              ? rec.time / static_cast<double>(g.edge_count())
                              : rec.time;
      rec.within_bound = rec.error <= bound + 1e-9;
      break;
    }
  }
  return rec;
}

}  // namespace detail

inline bool grid_point_feasible(const GridPoint& p) {
  if (p.n < 2 || !(p.delta > 0.0)) return false;
  const long max_e = static_cast<long>(p.n) * (p.n - 1) / 2;
  switch (p.family) {
    case GraphFamily::star:
    case GraphFamily::complete: return true;  // edge count implied by family
    case GraphFamily::random_connected: return p.e >= p.n - 1 && p.e <= max_e;
  }
  return false;
}

// Runs every (grid point, trial) cell once: one graph and one data vector per
// cell, shared by all selected algorithms, each drawing from its own derived
// stream. Aggregation order is fixed by the requested grid, so the result is
// identical for any thread count.
inline std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.points.empty()) throw std::invalid_argument("experiment: empty grid");
  if (spec.algorithms.empty()) throw std::invalid_argument("experiment: no algorithms selected");
  if (spec.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");

  std::vector<std::size_t> kept;  // indices of feasible points
  for (std::size_t pi = 0; pi < spec.points.size(); ++pi) {
    if (grid_point_feasible(spec.points[pi])) {
      kept.push_back(pi);
    } else {
      const auto& p = spec.points[pi];
      std::cerr << "warning: skipping infeasible grid point n=" << p.n << " e=" << p.e
                << " delta=" << p.delta << "\n";
    }
  }

  const std::size_t n_algos = spec.algorithms.size();
  // slot layout: [kept point][trial][algorithm]
  std::vector<detail::TrialRecord> slots(kept.size() * spec.trials * n_algos);

  auto run_cell = [&](std::size_t cell) {
    const std::size_t ki = cell / spec.trials;
    const int trial = static_cast<int>(cell % spec.trials);
    const std::size_t pi = kept[ki];
    const GridPoint& p = spec.points[pi];
    const std::uint64_t trial_seed =
        derive_seed({spec.master_seed, static_cast<std::uint64_t>(pi),
                     static_cast<std::uint64_t>(trial)});
    const Graph g = detail::make_graph(p, derive_seed({trial_seed, 0}));
    RngStream data_rng(derive_seed({trial_seed, 1}));
    Vec r(p.n);
    const double stddev = static_cast<double>(p.n) * static_cast<double>(p.n);
    for (int i = 0; i < p.n; ++i) r[i] = data_rng.next_normal(0.0, stddev);
    for (std::size_t ai = 0; ai < n_algos; ++ai) {
      const std::uint64_t algo_seed = derive_seed({trial_seed, 2 + static_cast<std::uint64_t>(ai)});
      slots[(ki * spec.trials + trial) * n_algos + ai] =
          detail::run_trial_algorithm(spec.algorithms[ai], g, r, spec, p, algo_seed);
    }
  };

  const std::size_t cells = kept.size() * static_cast<std::size_t>(spec.trials);
  const int workers = std::max(1, spec.threads);
  if (workers == 1 || cells <= 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) run_cell(c);
      });
    for (auto& t : pool) t.join();
  }

  // ordered reduce: rows follow the requested (point, algorithm) order
  std::vector<ExperimentRow> rows;
  rows.reserve(kept.size() * n_algos);
  for (std::size_t ki = 0; ki < kept.size(); ++ki) {
    const GridPoint& p = spec.points[kept[ki]];
    long edge_count = p.e;
    if (p.family == GraphFamily::star) edge_count = p.n - 1;
    if (p.family == GraphFamily::complete) edge_count = static_cast<long>(p.n) * (p.n - 1) / 2;
    for (std::size_t ai = 0; ai < n_algos; ++ai) {
      ExperimentRow row;
      row.point = p;
      row.point.e = edge_count;
      row.algorithm = spec.algorithms[ai];
      row.trials = spec.trials;
      row.bound = error_bound(spec.rho, edge_count, p.n, p.delta);
      for (int t = 0; t < spec.trials; ++t) {
        const auto& rec = slots[(ki * spec.trials + t) * n_algos + ai];
        if (rec.outcome == 0) ++row.converged;
        else if (rec.outcome == 1) ++row.cyclic;
        else ++row.capped;
        row.mean_error += rec.error;
        row.max_error = std::max(row.max_error, rec.error);
        row.mean_time += rec.time;
        row.mean_time_adjusted += rec.time_adjusted;
        if (rec.within_bound) ++row.within_bound;
      }
      row.mean_error /= spec.trials;
      row.mean_time /= spec.trials;
      row.mean_time_adjusted /= spec.trials;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Cycle accounting over graph families: for each (family, size) cell runs the
// deterministic and two-stage algorithms and tallies outcomes.
struct CycleCountSpec {
  std::vector<GraphFamily> families{GraphFamily::star, GraphFamily::random_connected,
                                    GraphFamily::complete};
  std::vector<int> sizes{10, 50};
  int trials = 200;
  std::uint64_t master_seed = 1;
  double rho = 1.0;
  double delta = 1.0;
  long max_iter = 100000;
  int threads = 1;
};

// Random-family edge count: midway between the tree and the complete graph.
inline long cycle_count_random_edges(int n) {
  const long lo = n - 1;
  const long hi = static_cast<long>(n) * (n - 1) / 2;
  return (lo + hi + 1) / 2;
}

inline std::vector<ExperimentRow> count_cycles(const CycleCountSpec& cspec) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::cycle_count;
  spec.algorithms = {Algorithm::dq, Algorithm::pqdq};
  spec.trials = cspec.trials;
  spec.master_seed = cspec.master_seed;
  spec.rho = cspec.rho;
  spec.max_iter = cspec.max_iter;
  spec.threads = cspec.threads;
  for (GraphFamily f : cspec.families)
    for (int n : cspec.sizes) {
      GridPoint p;
      p.n = n;
      p.delta = cspec.delta;
      p.family = f;
      p.e = f == GraphFamily::random_connected ? cycle_count_random_edges(n)
            : f == GraphFamily::star           ? n - 1
                                               : static_cast<long>(n) * (n - 1) / 2;
      spec.points.push_back(p);
    }
  return run_experiment(spec);
}

}  // namespace qcadmm
