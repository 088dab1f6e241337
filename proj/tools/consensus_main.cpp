// Command-line driver: single runs with traces, Monte-Carlo sweeps, cycle
// accounting over graph families, and spectral diagnostics for a given graph.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcadmm/baselines.hpp"
#include "qcadmm/consensus.hpp"
#include "qcadmm/experiment.hpp"
#include "qcadmm/graph.hpp"
#include "qcadmm/output.hpp"
#include "qcadmm/quantize.hpp"
#include "qcadmm/rng.hpp"
#include "qcadmm/spectral.hpp"

namespace {

using namespace qcadmm;

struct RunOpts {
  std::string algo = "dq";
  int n = 50;
  long e = 500;
  double delta = 1.0;
  double rho = 1.0;
  std::uint64_t seed = 1;
  long max_iter = 100000;
  std::string out;
  std::string format = "csv";
  std::string graph_file;
  std::string quantizer;
};

struct SweepOpts {
  std::vector<std::string> algos{"dq", "pqdq", "gossip", "classical"};
  std::vector<int> ns{50};
  std::vector<long> es{500};
  std::vector<double> deltas{1.0};
  double rho = 1.0;
  int trials = 0;  // 0 = auto
  std::uint64_t seed = 1;
  long max_iter = 100000;
  std::string out;
  std::string format = "csv";
  bool full = false;
  int threads = 1;
};

struct CyclesOpts {
  std::vector<int> ns{10, 50};
  double delta = 1.0;
  double rho = 1.0;
  int trials = 0;  // 0 = auto
  std::uint64_t seed = 1;
  long max_iter = 100000;
  std::string out;
  std::string format = "csv";
  bool full = false;
  int threads = 1;
};

struct SpectraOpts {
  std::string graph_file;
  int n = 0;
  long e = 0;
  double rho = 1.0;
  double delta = 1.0;
  std::uint64_t seed = 1;
};

Graph load_or_generate(const std::string& graph_file, int n, long e, std::uint64_t seed) {
  if (!graph_file.empty()) return read_graph(graph_file);
  return gen_random_connected(n, e, derive_seed({seed, 0}));
}

Vec draw_data(int n, std::uint64_t seed) {
  RngStream rng(derive_seed({seed, 1}));
  Vec r(n);
  const double stddev = static_cast<double>(n) * static_cast<double>(n);
  for (int i = 0; i < n; ++i) r[i] = rng.next_normal(0.0, stddev);
  return r;
}

std::optional<QuantScheme> parse_quantizer(const std::string& s) {
  if (s.empty()) return {};
  if (s == "prob" || s == "probabilistic") return QuantScheme::probabilistic;
  if (s == "round" || s == "rounding") return QuantScheme::rounding;
  if (s == "round_down") return QuantScheme::round_down;
  throw std::invalid_argument("unknown quantizer: " + s +
                              " (expected prob|round|round_down)");
}

int do_run(const RunOpts& o) {
  const Graph g = load_or_generate(o.graph_file, o.n, o.e, o.seed);
  const Vec r = draw_data(g.n(), o.seed);
  const double x_avg = data_average(r);
  const double bound = error_bound(o.rho, g.edge_count(), g.n(), o.delta);
  const bool want_trace = !o.out.empty() && o.format == "csv";
  const auto scheme_override = parse_quantizer(o.quantizer);

  RunConfig cfg;
  cfg.r = r;
  cfg.rho = o.rho;
  cfg.delta = o.delta;
  cfg.max_iter = o.max_iter;
  cfg.seed = derive_seed({o.seed, 2});

  nlohmann::json j;
  std::vector<double> errors;
  std::vector<Vec> values;

  const Algorithm algo = algorithm_from_string(o.algo);
  if (scheme_override && algo != Algorithm::gossip && algo != Algorithm::classical)
    throw std::invalid_argument("--quantizer only applies to gossip/classical; " + o.algo +
                                " fixes its quantizer");

  switch (algo) {
    case Algorithm::dq: {
      ConsensusState init;
      init.x.assign(g.n(), 0.0);
      init.alpha.assign(g.n(), 0.0);
      RunResult res = run_dq(init, g, cfg, want_trace);
      j = run_result_to_json(res);
      errors = std::move(res.trace);
      values = std::move(res.quantized_trace);
      break;
    }
    case Algorithm::pqdq: {
      RunResult res = run_pqdq(g, cfg, want_trace);
      j = run_result_to_json(res);
      errors = std::move(res.trace);
      values = std::move(res.quantized_trace);
      break;
    }
    case Algorithm::pq: {
      const long steps = std::min(o.max_iter, 2 * pqdq_stage1_k(g.n(), o.delta, o.rho));
      PqTrace tr = run_pq(g, cfg, steps);
      j["outcome"] = "iteration_capped";
      j["k0"] = steps;
      j["consensus_error"] = tr.errors.back();
      j["bound"] = bound;
      j["within_bound"] = tr.errors.back() <= bound + 1e-9;
      errors = std::move(tr.errors);
      values = std::move(tr.x_quant);
      break;
    }
    case Algorithm::cadmm: {
      ConsensusState s;
      s.x.assign(g.n(), 0.0);
      s.alpha.assign(g.n(), 0.0);
      errors.push_back(iterative_error(s.x, x_avg));
      values.push_back(s.x);
      long converged_at = -1;
      for (long k = 0; k < o.max_iter; ++k) {
        s = cadmm_step(s, g, cfg);
        errors.push_back(iterative_error(s.x, x_avg));
        values.push_back(s.x);
        if (errors.back() < 1e-8) {
          converged_at = s.k;
          break;
        }
      }
      j["outcome"] = converged_at >= 0 ? "converged" : "iteration_capped";
      j["k0"] = converged_at >= 0 ? converged_at : o.max_iter;
      j["consensus_error"] = errors.back();
      j["bound"] = bound;
      j["within_bound"] = errors.back() <= bound + 1e-9;
      break;
    }
    case Algorithm::gossip:
    case Algorithm::classical: {
      RngStream rng(cfg.seed);
      BaselineRun run = run_baseline(
          algo == Algorithm::gossip ? BaselineKind::gossip : BaselineKind::classical, r, g,
          o.delta, o.max_iter, rng, want_trace, scheme_override);
      j["outcome"] = run.converged ? "converged" : "iteration_capped";
      j["k0"] = run.k0;
      j["consensus_error"] = run.consensus_error;
      j["bound"] = bound;
      j["within_bound"] = run.consensus_error <= bound + 1e-9;
      if (run.converged) j["x_star"] = run.x_star;
      if (algo == Algorithm::gossip)
        j["k0_per_edge"] = static_cast<double>(run.k0) / static_cast<double>(g.edge_count());
      errors = std::move(run.errors);
      values = std::move(run.quantized_trace);
      break;
    }
  }

  j["n"] = g.n();
  j["e"] = g.edge_count();
  j["delta"] = o.delta;
  j["rho"] = o.rho;
  j["seed"] = o.seed;
  j["algorithm"] = o.algo;
  j["x_avg"] = x_avg;
  std::cout << j.dump(2) << "\n";

  if (!o.out.empty()) {
    if (o.format == "csv") {
      detail::write_file(o.out, trace_to_csv(errors, values));
    } else if (o.format == "json") {
      detail::write_file(o.out, j.dump(2) + "\n");
    } else {
      throw std::invalid_argument("unknown output format: " + o.format);
    }
  }
  return 0;
}

int do_sweep(const SweepOpts& o) {
  ExperimentSpec spec;
  for (const auto& a : o.algos) spec.algorithms.push_back(algorithm_from_string(a));
  spec.rho = o.rho;
  spec.master_seed = o.seed;
  spec.max_iter = o.max_iter;
  spec.threads = o.threads;
  spec.trials = o.trials > 0 ? o.trials : (o.full ? 100 : 20);

  const bool many_n = o.ns.size() > 1;
  const bool many_e = o.es.size() > 1;
  const bool many_d = o.deltas.size() > 1;
  if (many_d && (many_n || many_e))
    throw std::invalid_argument("sweep: vary delta alone or the graph size, not both");

  if (many_n && many_e) {
    if (o.ns.size() != o.es.size())
      throw std::invalid_argument(
          "sweep: --n and --e lists of different lengths (equal-length lists are paired)");
    spec.kind = ExperimentKind::sweep_avg_degree;
    for (std::size_t i = 0; i < o.ns.size(); ++i)
      spec.points.push_back({o.ns[i], o.es[i], o.deltas[0], GraphFamily::random_connected});
  } else if (many_d) {
    spec.kind = ExperimentKind::delta_sweep;
    for (double d : o.deltas)
      spec.points.push_back({o.ns[0], o.es[0], d, GraphFamily::random_connected});
  } else if (many_n) {
    spec.kind = ExperimentKind::sweep_nodes;
    for (int n : o.ns)
      spec.points.push_back({n, o.es[0], o.deltas[0], GraphFamily::random_connected});
  } else {
    spec.kind = ExperimentKind::sweep_edges;
    for (long e : o.es)
      spec.points.push_back({o.ns[0], e, o.deltas[0], GraphFamily::random_connected});
  }

  auto rows = run_experiment(spec);
  if (o.out.empty()) {
    std::cout << rows_to_csv(rows, spec.kind);
  } else {
    emit_outputs(rows, spec.kind, o.format, o.out);
    std::cout << "wrote " << o.out << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

int do_cycles(const CyclesOpts& o) {
  CycleCountSpec cspec;
  cspec.sizes = o.ns;
  cspec.trials = o.trials > 0 ? o.trials : (o.full ? 10000 : 200);
  cspec.master_seed = o.seed;
  cspec.rho = o.rho;
  cspec.delta = o.delta;
  cspec.max_iter = o.max_iter;
  cspec.threads = o.threads;

  auto rows = count_cycles(cspec);
  if (o.out.empty()) {
    std::cout << rows_to_csv(rows, ExperimentKind::cycle_count);
  } else {
    emit_outputs(rows, ExperimentKind::cycle_count, o.format, o.out);
    std::cout << "wrote " << o.out << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

int do_spectra(const SpectraOpts& o) {
  if (o.graph_file.empty() && o.n < 2)
    throw std::invalid_argument("spectra: provide --graph-file or --n/--e");
  const Graph g = load_or_generate(o.graph_file, o.n, o.e, o.seed);
  const IncidenceSet inc = build_incidence(g);
  const SpectralBounds sb = spectral_bounds(inc, o.rho);
  nlohmann::json j;
  j["n"] = g.n();
  j["e"] = g.edge_count();
  j["rho"] = o.rho;
  j["sigma_max_mplus"] = sb.sigma_max_mplus;
  j["sigma_min_mminus"] = sb.sigma_min_mminus;
  j["delta"] = sb.delta;
  j["quantization_delta"] = o.delta;
  j["bound"] = error_bound(o.rho, g.edge_count(), g.n(), o.delta);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized distributed average consensus simulator"};
  app.require_subcommand(1);

  RunOpts ro;
  auto* run = app.add_subcommand("run", "Run one algorithm on one graph and report the outcome");
  run->add_option("--algo", ro.algo, "cadmm|pq|dq|pqdq|gossip|classical")
      ->capture_default_str();
  run->add_option("--n", ro.n, "node count")->capture_default_str();
  run->add_option("--e", ro.e, "edge count")->capture_default_str();
  run->add_option("--delta", ro.delta, "quantization resolution")->capture_default_str();
  run->add_option("--rho", ro.rho, "ADMM step size")->capture_default_str();
  run->add_option("--seed", ro.seed, "master seed")->capture_default_str();
  run->add_option("--max-iter", ro.max_iter, "iteration cap")->capture_default_str();
  run->add_option("--out", ro.out, "output file (csv: per-iteration trace, json: result)");
  run->add_option("--format", ro.format, "csv|json")->capture_default_str();
  run->add_option("--graph-file", ro.graph_file, "edge-list file instead of a generated graph");
  run->add_option("--quantizer", ro.quantizer,
                  "override baseline quantizer: prob|round|round_down");

  SweepOpts so;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over a parameter grid");
  sweep->add_option("--algo", so.algos, "comma-separated algorithm list")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--n", so.ns, "node counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--e", so.es, "edge counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--delta", so.deltas, "quantization resolutions")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--rho", so.rho, "ADMM step size")->capture_default_str();
  sweep->add_option("--trials", so.trials, "trials per grid point (0 = auto)");
  sweep->add_option("--seed", so.seed, "master seed")->capture_default_str();
  sweep->add_option("--max-iter", so.max_iter, "iteration cap")->capture_default_str();
  sweep->add_option("--out", so.out, "output file; stdout when omitted");
  sweep->add_option("--format", so.format, "csv|json")->capture_default_str();
  sweep->add_flag("--full", so.full, "full-scale trial counts (100 per point)");
  sweep->add_option("--threads", so.threads, "worker threads")->capture_default_str();

  CyclesOpts co;
  auto* cycles =
      app.add_subcommand("cycles", "Count converged/cyclic outcomes across graph families");
  cycles->add_option("--n", co.ns, "node counts")->delimiter(',')->capture_default_str();
  cycles->add_option("--delta", co.delta, "quantization resolution")->capture_default_str();
  cycles->add_option("--rho", co.rho, "ADMM step size")->capture_default_str();
  cycles->add_option("--trials", co.trials, "trials per family/size (0 = auto)");
  cycles->add_option("--seed", co.seed, "master seed")->capture_default_str();
  cycles->add_option("--max-iter", co.max_iter, "iteration cap")->capture_default_str();
  cycles->add_option("--out", co.out, "output file; stdout when omitted");
  cycles->add_option("--format", co.format, "csv|json")->capture_default_str();
  cycles->add_flag("--full", co.full, "full-scale trial counts (10000)");
  cycles->add_option("--threads", co.threads, "worker threads")->capture_default_str();

  SpectraOpts po;
  auto* spectra = app.add_subcommand("spectra", "Spectral quantities and error bound for a graph");
  spectra->add_option("--graph-file", po.graph_file, "edge-list file");
  spectra->add_option("--n", po.n, "node count (generated graph)");
  spectra->add_option("--e", po.e, "edge count (generated graph)");
  spectra->add_option("--rho", po.rho, "ADMM step size")->capture_default_str();
  spectra->add_option("--delta", po.delta, "quantization resolution")->capture_default_str();
  spectra->add_option("--seed", po.seed, "seed for generated graph")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;
  }

  try {
    if (*run) return do_run(ro);
    if (*sweep) return do_sweep(so);
    if (*cycles) return do_cycles(co);
    if (*spectra) return do_spectra(po);
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
