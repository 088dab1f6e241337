#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcadmm/graph.hpp"
#include "qcadmm/linalg.hpp"
#include "qcadmm/metrics.hpp"
#include "qcadmm/quantize.hpp"
#include "qcadmm/rng.hpp"
#include "qcadmm/spectral.hpp"

namespace qcadmm {

// Node-form iterate: per-node variables x and multipliers alpha. The
// initialization condition (alpha in the column space of L-) makes alpha
// zero-sum at every iteration.
struct ConsensusState {
  Vec x;
  Vec alpha;
  long k = 0;
};

struct RunConfig {
  Vec r;                          // local data, one entry per node
  double rho = 1.0;               // ADMM step size
  double delta = 1.0;             // quantization resolution
  long max_iter = 100000;
  std::uint64_t seed = 0;
  std::optional<long> k_stage1;   // two-stage schedule override for K
};

enum class Outcome { converged, cyclic, iteration_capped };

struct RunResult {
  Outcome outcome = Outcome::iteration_capped;
  double x_star = 0.0;            // common quantized value, or the cycle mean
  long k0 = 0;                    // first-hit iteration (cycle entry)
  long period = 0;                // 1 when converged, >= 2 when cyclic
  double consensus_error = 0.0;
  double bound = 0.0;             // (1/2 + rho*2E/N)*delta
  bool within_bound = false;
  bool exact_encoding = true;     // false: tolerance-matched fallback was used
  double cycle_mean_spread = 0.0; // max deviation of per-node period means
  long stage1_iterations = 0;     // 2K when produced by the two-stage run
  long total_iterations = 0;      // steps executed before classification
  std::vector<double> trace;              // per-iteration iterative error
  std::vector<Vec> quantized_trace;       // broadcast values per iteration
};

namespace detail {

inline void check_config(const RunConfig& cfg, int n) {
  if (static_cast<int>(cfg.r.size()) != n)
    throw std::invalid_argument("run config: data vector length does not match node count");
  if (!(cfg.rho > 0.0)) throw std::invalid_argument("run config: rho must be positive");
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("run config: delta must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("run config: max_iter must be >= 1");
}

// x_i <- (rho*|N_i|*xb_i + rho*sum_j xb_j - alpha_i + r_i) / (1 + 2*rho*|N_i|)
// where xb carries the values in play this iteration (raw or quantized).
inline Vec x_update(const Graph& g, const Vec& xb, const Vec& alpha, const Vec& r, double rho) {
  const int n = g.n();
  Vec xn(n);
  for (int i = 0; i < n; ++i) {
    double nb = 0.0;
    for (int j : g.neighbors(i)) nb += xb[j];
    const double d = g.degree(i);
    xn[i] = (rho * d * xb[i] + rho * nb - alpha[i] + r[i]) / (1.0 + 2.0 * rho * d);
  }
  return xn;
}

// alpha_i <- alpha_i + rho*(|N_i|*xb_i - sum_j xb_j), i.e. alpha + rho*L-*xb.
inline Vec alpha_update(const Graph& g, const Vec& alpha, const Vec& xb, double rho) {
  const int n = g.n();
  Vec an(n);
  for (int i = 0; i < n; ++i) {
    double nb = 0.0;
    for (int j : g.neighbors(i)) nb += xb[j];
    an[i] = alpha[i] + rho * (g.degree(i) * xb[i] - nb);
  }
  return an;
}

}  // namespace detail

// One synchronous unquantized step: all x from iteration-k values, then all
// alpha from the fresh x.
inline ConsensusState cadmm_step(const ConsensusState& s, const Graph& g, const RunConfig& cfg) {
  detail::check_config(cfg, g.n());
  ConsensusState out;
  out.x = detail::x_update(g, s.x, s.alpha, cfg.r, cfg.rho);
  out.alpha = detail::alpha_update(g, s.alpha, out.x, cfg.rho);
  out.k = s.k + 1;
  return out;
}

// Probabilistically quantized step. Each node quantizes its x once and that
// broadcast value feeds its own update and all neighbors'; the alpha-update
// uses a fresh quantization of the new x.
inline ConsensusState pq_cadmm_step(const ConsensusState& s, const Graph& g, const RunConfig& cfg,
                                    RngStream& rng) {
  detail::check_config(cfg, g.n());
  const Vec xq = quantize(s.x, cfg.delta, QuantScheme::probabilistic, rng);
  ConsensusState out;
  out.x = detail::x_update(g, xq, s.alpha, cfg.r, cfg.rho);
  const Vec xq1 = quantize(out.x, cfg.delta, QuantScheme::probabilistic, rng);
  out.alpha = detail::alpha_update(g, s.alpha, xq1, cfg.rho);
  out.k = s.k + 1;
  return out;
}

// Deterministically quantized step; same structure with the rounding
// quantizer, making the whole map deterministic.
inline ConsensusState dq_cadmm_step(const ConsensusState& s, const Graph& g,
                                    const RunConfig& cfg) {
  detail::check_config(cfg, g.n());
  const int n = g.n();
  Vec xq(n), xq1(n);
  for (int i = 0; i < n; ++i) xq[i] = q_round(s.x[i], cfg.delta);
  ConsensusState out;
  out.x = detail::x_update(g, xq, s.alpha, cfg.r, cfg.rho);
  for (int i = 0; i < n; ++i) xq1[i] = q_round(out.x[i], cfg.delta);
  out.alpha = detail::alpha_update(g, s.alpha, xq1, cfg.rho);
  out.k = s.k + 1;
  return out;
}

namespace detail {

struct StateKeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : v) {
      h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(mix64(h));
  }
};

// Iterates the DQ map with exact cycle detection. The visited state is
// (x_Qd, alpha) encoded as integers: x_Qd/delta, and (alpha - alpha0)/(rho*
// delta), which is an integer because every alpha increment is rho*(integer
// combination of lattice points). If the rounding residual of the alpha
// encoding ever exceeds the snap guard, the caller restarts in fallback mode,
// which matches x_Qd exactly and alpha within the same tolerance.
inline RunResult run_dq_impl(const ConsensusState& initial, const Graph& g, const RunConfig& cfg,
                             bool record_trace, bool exact_mode, bool& encoding_failed) {
  const int n = g.n();
  check_config(cfg, n);
  if (static_cast<int>(initial.x.size()) != n || static_cast<int>(initial.alpha.size()) != n)
    throw std::invalid_argument("run_dq: initial state size does not match node count");

  const double x_avg = data_average(cfg.r);
  const double rd = cfg.rho * cfg.delta;
  const double snap_tol = 1e-6;
  encoding_failed = false;

  RunResult res;
  res.bound = error_bound(cfg.rho, g.edge_count(), n, cfg.delta);
  res.exact_encoding = exact_mode;

  Vec x = initial.x;
  Vec alpha = initial.alpha;
  const Vec alpha_base = initial.alpha;

  std::vector<std::vector<std::int64_t>> xq_hist;   // lattice indices per iteration
  std::vector<Vec> alpha_hist;                      // fallback mode only
  std::unordered_map<std::vector<std::int64_t>, long, StateKeyHash> seen;       // exact mode
  std::unordered_map<std::vector<std::int64_t>, std::vector<long>, StateKeyHash>
      seen_by_xq;                                   // fallback mode

  auto encode_xq = [&](const Vec& xq) {
    std::vector<std::int64_t> ints(n);
    for (int i = 0; i < n; ++i) ints[i] = std::llround(xq[i] / cfg.delta);
    return ints;
  };
  auto encode_full = [&](const std::vector<std::int64_t>& xq_ints, const Vec& a, bool& ok) {
    std::vector<std::int64_t> key(2 * n);
    for (int i = 0; i < n; ++i) key[i] = xq_ints[i];
    for (int i = 0; i < n; ++i) {
      const double s = (a[i] - alpha_base[i]) / rd;
      const double r = std::nearbyint(s);
      if (std::abs(s - r) > snap_tol) ok = false;
      key[n + i] = std::llround(r);
    }
    return key;
  };

  auto classify = [&](long entry, long hit) {
    const long period = hit - entry;
    res.k0 = entry;
    res.period = period;
    res.total_iterations = hit;
    // per-node means over one period; integer sums, so exact
    Vec means(n, 0.0);
    for (long l = entry; l < hit; ++l)
      for (int i = 0; i < n; ++i) means[i] += static_cast<double>(xq_hist[l][i]);
    for (int i = 0; i < n; ++i) means[i] = means[i] * cfg.delta / static_cast<double>(period);
    double lo = means[0], hi = means[0], sum = 0.0;
    for (double m : means) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
      sum += m;
    }
    res.cycle_mean_spread = hi - lo;
    if (period == 1) {
      res.outcome = Outcome::converged;
      res.x_star = means[0];
    } else {
      res.outcome = Outcome::cyclic;
      res.x_star = sum / n;
    }
    res.consensus_error = std::abs(res.x_star - x_avg);
    res.within_bound = res.consensus_error <= res.bound + 1e-9;
  };

  long k = 0;
  while (true) {
    Vec xq(n);
    for (int i = 0; i < n; ++i) xq[i] = q_round(x[i], cfg.delta);
    auto xq_ints = encode_xq(xq);

    if (record_trace) {
      res.trace.push_back(iterative_error(xq, x_avg));
      res.quantized_trace.push_back(xq);
    }

    // look up (x_Qd, alpha) among visited states
    long match = -1;
    if (exact_mode) {
      bool ok = true;
      auto key = encode_full(xq_ints, alpha, ok);
      if (!ok) {
        encoding_failed = true;
        return res;
      }
      auto [it, inserted] = seen.try_emplace(std::move(key), k);
      if (!inserted) match = it->second;
    } else {
      auto& cands = seen_by_xq[xq_ints];
      for (long c : cands) {
        double dmax = 0.0;
        for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(alpha[i] - alpha_hist[c][i]));
        if (dmax <= snap_tol * rd) {
          match = c;
          break;
        }
      }
      if (match < 0) {
        cands.push_back(k);
        alpha_hist.push_back(alpha);
      }
    }

    if (match >= 0) {
      xq_hist.push_back(std::move(xq_ints));  // keep indices aligned with iterations
      classify(match, k);
      return res;
    }
    xq_hist.push_back(std::move(xq_ints));

    if (k >= cfg.max_iter) {
      res.outcome = Outcome::iteration_capped;
      res.k0 = k;
      res.period = 0;
      res.total_iterations = k;
      res.consensus_error = iterative_error(xq, x_avg);
      res.within_bound = res.consensus_error <= res.bound + 1e-9;
      res.x_star = std::numeric_limits<double>::quiet_NaN();
      return res;
    }

    // one DQ step, reusing this iteration's broadcast
    Vec xn = x_update(g, xq, alpha, cfg.r, cfg.rho);
    Vec xq1(n);
    for (int i = 0; i < n; ++i) xq1[i] = q_round(xn[i], cfg.delta);
    alpha = alpha_update(g, alpha, xq1, cfg.rho);
    x = std::move(xn);
    ++k;
  }
}

}  // namespace detail

// Runs the deterministically quantized iteration until the visited-state set
// repeats: a revisit at distance 1 is convergence, distance >= 2 a cycle
// whose per-node means over one period agree (the reported consensus value).
// Hitting max_iter yields an iteration-capped result, not an error.
inline RunResult run_dq(const ConsensusState& initial, const Graph& g, const RunConfig& cfg,
                        bool record_trace = false) {
  bool failed = false;
  RunResult res = detail::run_dq_impl(initial, g, cfg, record_trace, true, failed);
  if (!failed) return res;
  res = detail::run_dq_impl(initial, g, cfg, record_trace, false, failed);
  res.exact_encoding = false;
  return res;
}

// K in the two-stage schedule: ceil(10N(log10(1/delta+1)+1)max{-log10(rho),1}).
inline long pqdq_stage1_k(int n, double delta, double rho) {
  const double v = 10.0 * static_cast<double>(n) * (std::log10(1.0 / delta + 1.0) + 1.0) *
                   std::max(-std::log10(rho), 1.0);
  return static_cast<long>(std::ceil(v));
}

// Probabilistic-quantization trajectory from x0 = 0, alpha0 = 0. Each node
// broadcasts one quantized value per iteration: the quantization of x^{k+1}
// used in the alpha-update is reused as the next iteration's broadcast.
struct PqTrace {
  std::vector<Vec> x;        // x^0 .. x^T
  std::vector<Vec> alpha;    // alpha^0 .. alpha^T
  std::vector<Vec> x_quant;  // broadcasts xq^0 .. xq^T
  std::vector<double> errors;
};

inline PqTrace run_pq(const Graph& g, const RunConfig& cfg, long steps) {
  const int n = g.n();
  detail::check_config(cfg, n);
  RngStream rng(cfg.seed);
  const double x_avg = data_average(cfg.r);

  PqTrace tr;
  Vec x(n, 0.0), alpha(n, 0.0);
  Vec xq = quantize(x, cfg.delta, QuantScheme::probabilistic, rng);
  tr.x.push_back(x);
  tr.alpha.push_back(alpha);
  tr.x_quant.push_back(xq);
  tr.errors.push_back(iterative_error(xq, x_avg));

  for (long k = 0; k < steps; ++k) {
    Vec xn = detail::x_update(g, xq, alpha, cfg.r, cfg.rho);
    Vec xqn = quantize(xn, cfg.delta, QuantScheme::probabilistic, rng);
    alpha = detail::alpha_update(g, alpha, xqn, cfg.rho);
    x = std::move(xn);
    xq = std::move(xqn);
    tr.x.push_back(x);
    tr.alpha.push_back(alpha);
    tr.x_quant.push_back(xq);
    tr.errors.push_back(iterative_error(xq, x_avg));
  }
  return tr;
}

// Two-stage run: 2K probabilistically quantized iterations from zero, then
// the deterministic stage seeded with the running averages of the last K
// iterates, which inherit the initialization condition.
inline RunResult run_pqdq(const Graph& g, const RunConfig& cfg, bool record_trace = false) {
  const int n = g.n();
  detail::check_config(cfg, n);
  RngStream rng(cfg.seed);
  const double x_avg = data_average(cfg.r);
  const long K = cfg.k_stage1.value_or(pqdq_stage1_k(n, cfg.delta, cfg.rho));

  Vec x(n, 0.0), alpha(n, 0.0);
  Vec xsum(n, 0.0), asum(n, 0.0);
  Vec xq = quantize(x, cfg.delta, QuantScheme::probabilistic, rng);
  std::vector<double> stage1_errors;
  std::vector<Vec> stage1_quant;
  if (record_trace) {
    stage1_errors.push_back(iterative_error(xq, x_avg));
    stage1_quant.push_back(xq);
  }

  for (long k = 1; k <= 2 * K; ++k) {
    Vec xn = detail::x_update(g, xq, alpha, cfg.r, cfg.rho);
    Vec xqn = quantize(xn, cfg.delta, QuantScheme::probabilistic, rng);
    alpha = detail::alpha_update(g, alpha, xqn, cfg.rho);
    x = std::move(xn);
    xq = std::move(xqn);
    if (k > K)
      for (int i = 0; i < n; ++i) {
        xsum[i] += x[i];
        asum[i] += alpha[i];
      }
    if (record_trace && k < 2 * K) {
      stage1_errors.push_back(iterative_error(xq, x_avg));
      stage1_quant.push_back(xq);
    }
  }

  ConsensusState stage2;
  stage2.x.resize(n);
  stage2.alpha.resize(n);
  for (int i = 0; i < n; ++i) {
    stage2.x[i] = xsum[i] / static_cast<double>(K);
    stage2.alpha[i] = asum[i] / static_cast<double>(K);
  }

  RunResult res = run_dq(stage2, g, cfg, record_trace);
  res.stage1_iterations = 2 * K;
  res.k0 += 2 * K;
  res.total_iterations += 2 * K;
  if (record_trace) {
    stage1_errors.insert(stage1_errors.end(), res.trace.begin(), res.trace.end());
    res.trace = std::move(stage1_errors);
    stage1_quant.insert(stage1_quant.end(), res.quantized_trace.begin(),
                        res.quantized_trace.end());
    res.quantized_trace = std::move(stage1_quant);
  }
  return res;
}

// Per-node prefix means of an iterate series.
inline std::vector<Vec> running_average(const std::vector<Vec>& trace) {
  if (trace.empty()) throw std::invalid_argument("running_average: empty trace");
  const std::size_t n = trace[0].size();
  std::vector<Vec> out(trace.size(), Vec(n, 0.0));
  Vec sum(n, 0.0);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += trace[k][i];
      out[k][i] = sum[i] / static_cast<double>(k + 1);
    }
  }
  return out;
}

// Convergence trace of the unquantized iteration; converged_at is the first
// iteration whose iterative error drops below tol.
struct CadmmRun {
  ConsensusState final_state;
  std::vector<double> errors;
  long converged_at = -1;
};

inline CadmmRun run_cadmm(const Graph& g, const RunConfig& cfg, const ConsensusState* init = nullptr,
                          double tol = 1e-8) {
  const int n = g.n();
  detail::check_config(cfg, n);
  const double x_avg = data_average(cfg.r);
  ConsensusState s;
  if (init) s = *init;
  else {
    s.x.assign(n, 0.0);
    s.alpha.assign(n, 0.0);
  }
  CadmmRun run;
  run.errors.push_back(iterative_error(s.x, x_avg));
  for (long k = 0; k < cfg.max_iter; ++k) {
    s = cadmm_step(s, g, cfg);
    const double err = iterative_error(s.x, x_avg);
    run.errors.push_back(err);
    if (err < tol) {
      run.converged_at = s.k;
      break;
    }
  }
  run.final_state = std::move(s);
  return run;
}

// ------------------------------------------------------------------
// Edge-form shadow (z, beta) tracked alongside the node iteration, used to
// exercise the G-norm contraction and the R-linear envelope.

struct EdgeState {
  Vec z;     // arc variables, 2E
  Vec beta;  // dual, 2E; alpha = M- * beta
};

// Arc endpoints in the fixed enumeration: arc q < E runs (i, j) with i < j
// along the sorted edge list, arc q + E is its reverse.
struct ArcIndex {
  std::vector<int> tail, head;
};

inline ArcIndex arc_index(const Graph& g) {
  const long e = g.edge_count();
  ArcIndex a;
  a.tail.resize(2 * e);
  a.head.resize(2 * e);
  for (long q = 0; q < e; ++q) {
    const auto& [i, j] = g.edges()[static_cast<std::size_t>(q)];
    a.tail[q] = i;
    a.head[q] = j;
    a.tail[q + e] = j;
    a.head[q + e] = i;
  }
  return a;
}

inline EdgeState edge_shadow_init(const Graph& g, const Vec& x0) {
  const ArcIndex arcs = arc_index(g);
  EdgeState es;
  es.z.resize(arcs.tail.size());
  es.beta.assign(arcs.tail.size(), 0.0);
  for (std::size_t q = 0; q < arcs.tail.size(); ++q)
    es.z[q] = 0.5 * (x0[arcs.tail[q]] + x0[arcs.head[q]]);  // z = 1/2 M+^T x
  return es;
}

inline EdgeState edge_shadow_step(const EdgeState& es, const Vec& x_new, const ArcIndex& arcs,
                                  double rho) {
  EdgeState out;
  out.z.resize(arcs.tail.size());
  out.beta.resize(arcs.tail.size());
  for (std::size_t q = 0; q < arcs.tail.size(); ++q) {
    const double xt = x_new[arcs.tail[q]];
    const double xh = x_new[arcs.head[q]];
    out.z[q] = 0.5 * (xt + xh);
    out.beta[q] = es.beta[q] + 0.5 * rho * (xt - xh);  // beta += rho/2 M-^T x
  }
  return out;
}

// alpha = M- beta computed arc-sparsely.
inline Vec multipliers_from_edge_duals(const Graph& g, const ArcIndex& arcs, const Vec& beta) {
  Vec alpha(g.n(), 0.0);
  for (std::size_t q = 0; q < arcs.tail.size(); ++q) {
    alpha[arcs.tail[q]] += beta[q];
    alpha[arcs.head[q]] -= beta[q];
  }
  return alpha;
}

struct ShadowRun {
  std::vector<Vec> x;          // x^0 .. x^T
  std::vector<EdgeState> u;    // u^0 .. u^T
};

inline ShadowRun run_cadmm_with_shadow(const Graph& g, const RunConfig& cfg, const Vec& x0,
                                       long steps) {
  const int n = g.n();
  detail::check_config(cfg, n);
  const ArcIndex arcs = arc_index(g);
  ConsensusState s;
  s.x = x0;
  s.alpha.assign(n, 0.0);  // beta^0 = 0, so alpha^0 = M- beta^0 = 0
  ShadowRun run;
  run.x.push_back(s.x);
  run.u.push_back(edge_shadow_init(g, s.x));
  for (long k = 0; k < steps; ++k) {
    s = cadmm_step(s, g, cfg);
    run.x.push_back(s.x);
    run.u.push_back(edge_shadow_step(run.u.back(), s.x, arcs, cfg.rho));
  }
  return run;
}

// u* = [z*; beta*] by running the shadow until the per-step change is below
// tol relative to the iterate magnitude. beta* is unique under the
// initialization condition, so this avoids any pseudo-inverse solve.
inline EdgeState edge_fixed_point(const Graph& g, const RunConfig& cfg, double tol = 1e-12,
                                  long cap = 500000) {
  const int n = g.n();
  detail::check_config(cfg, n);
  const ArcIndex arcs = arc_index(g);
  ConsensusState s;
  s.x.assign(n, 0.0);
  s.alpha.assign(n, 0.0);
  EdgeState u = edge_shadow_init(g, s.x);
  for (long k = 0; k < cap; ++k) {
    s = cadmm_step(s, g, cfg);
    EdgeState un = edge_shadow_step(u, s.x, arcs, cfg.rho);
    double change = 0.0, scale = 1.0;
    for (std::size_t q = 0; q < u.z.size(); ++q) {
      change = std::max({change, std::abs(un.z[q] - u.z[q]), std::abs(un.beta[q] - u.beta[q])});
      scale = std::max({scale, std::abs(un.z[q]), std::abs(un.beta[q])});
    }
    u = std::move(un);
    if (change <= tol * scale) return u;
  }
  throw std::runtime_error("edge_fixed_point: no convergence within iteration cap");
}

struct ContractionViolation {
  long k;
  double lhs, rhs;
  const char* which;  // "q_contraction" or "r_envelope"
};

struct ContractionReport {
  std::vector<bool> q_contraction_ok;  // ||u^{k+1}-u*||_G^2 <= 1/(1+delta) ||u^k-u*||_G^2
  std::vector<bool> r_envelope_ok;     // ||s^{k+1}-s*||_2 <= C ||u^k-u*||_G
  std::vector<ContractionViolation> violations;
  bool all_ok() const { return violations.empty(); }
};

// Verifies the per-step Q-linear contraction of u in the G-norm and the
// R-linear envelope on the stacked state, with relative slack for roundoff.
inline ContractionReport contraction_check(const ShadowRun& run, const EdgeState& u_star,
                                           const SpectralBounds& bounds, const GMetric& gm,
                                           const Graph& g, double rel_slack = 1e-9) {
  if (run.u.size() != run.x.size() || run.u.empty())
    throw std::invalid_argument("contraction_check: malformed trace");
  const int n = g.n();
  const ArcIndex arc = arc_index(g);
  const std::size_t arcs = u_star.z.size();
  const double x_avg = [&] {
    double s = 0.0;
    for (double v : u_star.z) s += v;
    return s / static_cast<double>(arcs);  // every z* entry equals x_avg
  }();
  const double envelope =
      1.0 + std::sqrt(bounds.rho / (1.0 + bounds.delta)) * bounds.sigma_max_mminus;

  auto u_dist_sq = [&](const EdgeState& u) {
    Vec d(2 * arcs);
    for (std::size_t q = 0; q < arcs; ++q) {
      d[q] = u.z[q] - u_star.z[q];
      d[arcs + q] = u.beta[q] - u_star.beta[q];
    }
    return g_norm_sq(d, gm);
  };

  ContractionReport rep;
  for (std::size_t k = 0; k + 1 < run.u.size(); ++k) {
    const double ug_k = u_dist_sq(run.u[k]);
    const double ug_k1 = u_dist_sq(run.u[k + 1]);

    const bool ok_q = ug_k1 <= ug_k / (1.0 + bounds.delta) + rel_slack * ug_k;
    rep.q_contraction_ok.push_back(ok_q);
    if (!ok_q)
      rep.violations.push_back({static_cast<long>(k), ug_k1, ug_k / (1.0 + bounds.delta),
                                "q_contraction"});

    // s^{k+1}-s*: x-part plus alpha-part (alpha = M- beta); the data block
    // cancels exactly
    Vec da(n, 0.0);
    for (std::size_t q = 0; q < arcs; ++q) {
      const double db = run.u[k + 1].beta[q] - u_star.beta[q];
      da[arc.tail[q]] += db;
      da[arc.head[q]] -= db;
    }
    double sdiff_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dx = run.x[k + 1][i] - x_avg;
      sdiff_sq += dx * dx + da[i] * da[i];
    }
    const double lhs = std::sqrt(sdiff_sq);
    const double rhs = envelope * std::sqrt(ug_k);
    const bool ok_r = lhs <= rhs * (1.0 + rel_slack) + rel_slack;
    rep.r_envelope_ok.push_back(ok_r);
    if (!ok_r) rep.violations.push_back({static_cast<long>(k), lhs, rhs, "r_envelope"});
  }
  return rep;
}

}  // namespace qcadmm
