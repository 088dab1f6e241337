#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcadmm/graph.hpp"
#include "qcadmm/linalg.hpp"
#include "qcadmm/metrics.hpp"
#include "qcadmm/quantize.hpp"
#include "qcadmm/rng.hpp"

namespace qcadmm {

// Doubly stochastic averaging matrix from local degrees:
// W_ij = 1/(1 + max(|N_i|, |N_j|)) on edges, diagonal fills each row to one.
struct MetropolisWeights {
  Matrix w;
};

inline MetropolisWeights metropolis_weights(const Graph& g) {
  const int n = g.n();
  Matrix w(n, n);
  for (const auto& [i, j] : g.edges()) {
    const double v = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
    w(i, j) = v;
    w(j, i) = v;
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j : g.neighbors(i)) row += w(i, j);
    w(i, i) = 1.0 - row;
  }
  return {std::move(w)};
}

// One pairwise gossip exchange: a uniformly random edge wakes up and both
// endpoints move to the average of their rounded values.
inline void gossip_step(Vec& x, const Graph& g, double delta, RngStream& rng) {
  const auto& edge = g.edges()[static_cast<std::size_t>(rng.below(
      static_cast<std::uint64_t>(g.edge_count())))];
  const double avg = 0.5 * (q_round(x[edge.first], delta) + q_round(x[edge.second], delta));
  x[edge.first] = avg;
  x[edge.second] = avg;
}

// One synchronous linear-averaging step on values rounded down to the lattice.
inline void classical_step(Vec& x, const MetropolisWeights& mw, double delta) {
  Vec xq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xq[i] = q_round_down(x[i], delta);
  x = mw.w * xq;
}

enum class BaselineKind { gossip, classical };

struct BaselineRun {
  bool converged = false;
  long k0 = 0;                 // first iteration of the stable window
  long total_iterations = 0;
  double x_star = 0.0;         // common quantized value when converged
  double consensus_error = 0.0;
  std::vector<double> errors;  // iterative error of the quantized values
  std::vector<Vec> quantized_trace;
};

// Iterates a baseline from x = x0 until the quantized values are equal across
// nodes and stay put for n consecutive iterations (the quantizer is the one
// the scheme transmits: rounding for gossip, round-down for the linear
// scheme, unless overridden), or until max_iter.
inline BaselineRun run_baseline(BaselineKind kind, const Vec& x0, const Graph& g, double delta,
                                long max_iter, RngStream& rng, bool record_trace = false,
                                std::optional<QuantScheme> scheme_override = {}) {
  const int n = g.n();
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("run_baseline: initial vector length does not match node count");
  if (!(delta > 0.0)) throw std::invalid_argument("run_baseline: delta must be positive");
  if (max_iter < 1) throw std::invalid_argument("run_baseline: max_iter must be >= 1");

  const double x_avg = data_average(x0);
  MetropolisWeights mw;
  if (kind == BaselineKind::classical) mw = metropolis_weights(g);
  const QuantScheme scheme = scheme_override.value_or(
      kind == BaselineKind::gossip ? QuantScheme::rounding : QuantScheme::round_down);

  BaselineRun run;
  Vec x = x0;
  Vec q = quantize(x, delta, scheme, rng);
  Vec prev_q;
  long stable = 0;   // consecutive iterations the common quantized value held
  long window_start = 0;

  for (long k = 0; k <= max_iter; ++k) {
    if (record_trace) {
      run.errors.push_back(iterative_error(q, x_avg));
      run.quantized_trace.push_back(q);
    }

    bool all_equal = true;
    for (double v : q)
      if (v != q[0]) {
        all_equal = false;
        break;
      }
    if (all_equal && !prev_q.empty() && q == prev_q) {
      if (stable == 0) window_start = k - 1;
      ++stable;
      if (stable >= n) {
        run.converged = true;
        run.k0 = window_start;
        run.total_iterations = k;
        run.x_star = q[0];
        run.consensus_error = std::abs(q[0] - x_avg);
        return run;
      }
    } else {
      stable = 0;
    }
    prev_q = std::move(q);

    if (k == max_iter) break;
    if (kind == BaselineKind::gossip) {
      const auto& edge = g.edges()[static_cast<std::size_t>(
          rng.below(static_cast<std::uint64_t>(g.edge_count())))];
      const double avg = 0.5 * (prev_q[edge.first] + prev_q[edge.second]);
      x[edge.first] = avg;
      x[edge.second] = avg;
    } else {
      x = mw.w * prev_q;
    }
    q = quantize(x, delta, scheme, rng);
  }

  run.converged = false;
  run.total_iterations = max_iter;
  run.k0 = max_iter;
  run.x_star = std::numeric_limits<double>::quiet_NaN();
  run.consensus_error = iterative_error(prev_q, x_avg);
  return run;
}

}  // namespace qcadmm
