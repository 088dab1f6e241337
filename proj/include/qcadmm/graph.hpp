#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcadmm/rng.hpp"

namespace qcadmm {

// Connected undirected network. Nodes are 0-indexed internally; the edge-list
// text format and CLI output are 1-indexed.
//
// Each undirected edge q = (i, j) with i < j owns two arcs: arc q = (i, j)
// and arc q + E = (j, i). All incidence matrices derive from this enumeration,
// so a graph rebuilt from the same edge list reproduces them exactly.
class Graph {
 public:
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 2) throw std::invalid_argument("graph: need at least 2 nodes");
    std::vector<std::pair<int, int>> norm;
    norm.reserve(edges.size());
    for (auto [i, j] : edges) {
      if (i == j) throw std::invalid_argument("graph: self-loop at node " + std::to_string(i + 1));
      if (i < 0 || j < 0 || i >= n || j >= n)
        throw std::invalid_argument("graph: edge endpoint out of range");
      norm.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(norm.begin(), norm.end());
    if (std::adjacent_find(norm.begin(), norm.end()) != norm.end())
      throw std::invalid_argument("graph: duplicate edge");
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(norm);
    g.neighbors_.assign(n, {});
    for (auto [i, j] : g.edges_) {
      g.neighbors_[i].push_back(j);
      g.neighbors_[j].push_back(i);
    }
    for (auto& nb : g.neighbors_) std::sort(nb.begin(), nb.end());
    if (!g.connected()) throw std::invalid_argument("graph: not connected");
    return g;
  }

  int n() const { return n_; }
  long edge_count() const { return static_cast<long>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
  int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }

  bool connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : neighbors_[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
    }
    return count == n_;
  }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
};

inline double average_degree(const Graph& g) { return 2.0 * g.edge_count() / g.n(); }

inline Graph complete(int n) {
  if (n < 2) throw std::invalid_argument("complete: need at least 2 nodes");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, std::move(edges));
}

inline Graph star(int n) {
  if (n < 2) throw std::invalid_argument("star: need at least 2 nodes");
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < n; ++j) edges.emplace_back(0, j);
  return Graph::from_edges(n, std::move(edges));
}

namespace detail {

// Reachability search with early exit once `to` is found. In a dense graph
// the target is usually reached within a hop or two.
inline bool reachable(const std::vector<std::vector<int>>& adj, int from, int to) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (v == to) return true;
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace detail

// Start from the complete graph and randomly remove edges while the network
// stays connected. A removal that would disconnect marks the edge as a bridge
// and retries another; bridges stay bridges as the graph only loses edges,
// so excluded candidates never need revisiting.
inline Graph gen_random_connected(int n, long e, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random_connected: need at least 2 nodes");
  const long e_max = static_cast<long>(n) * (n - 1) / 2;
  if (e < n - 1 || e > e_max)
    throw std::invalid_argument("gen_random_connected: edge count " + std::to_string(e) +
                                " outside [" + std::to_string(n - 1) + ", " +
                                std::to_string(e_max) + "] for n=" + std::to_string(n));

  std::vector<std::pair<int, int>> alive;
  alive.reserve(e_max);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) alive.emplace_back(i, j);
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : alive) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  RngStream rng(seed);
  long remaining = e_max;
  long candidates = remaining;  // alive[0..candidates) removable-so-far, rest are bridges
  while (remaining > e) {
    if (candidates == 0)
      throw std::runtime_error("gen_random_connected: no removable edge left");  // unreachable
    const long pick = static_cast<long>(rng.below(static_cast<std::uint64_t>(candidates)));
    const auto [u, v] = alive[pick];
    auto unlink = [&](int a, int b) {
      auto& lst = adj[a];
      lst.erase(std::find(lst.begin(), lst.end(), b));
    };
    unlink(u, v);
    unlink(v, u);
    if (detail::reachable(adj, u, v)) {
      std::swap(alive[pick], alive[candidates - 1]);
      std::swap(alive[candidates - 1], alive[remaining - 1]);
      alive.pop_back();
      --remaining;
      --candidates;
    } else {
      adj[u].push_back(v);
      adj[v].push_back(u);
      std::swap(alive[pick], alive[--candidates]);  // bridge: exclude permanently
    }
  }

  std::sort(alive.begin(), alive.end());
  return Graph::from_edges(n, std::move(alive));
}

// Edge-list text format: first line "N E", then one "i j" pair per line,
// 1-indexed.
inline void write_graph(const Graph& g, std::ostream& out) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [i, j] : g.edges()) out << i + 1 << ' ' << j + 1 << '\n';
}

inline Graph read_graph(std::istream& in) {
  int n = 0;
  long e = 0;
  if (!(in >> n >> e)) throw std::invalid_argument("graph file: missing \"N E\" header");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(e);
  for (long q = 0; q < e; ++q) {
    int i = 0, j = 0;
    if (!(in >> i >> j))
      throw std::invalid_argument("graph file: expected " + std::to_string(e) + " edges, got " +
                                  std::to_string(q));
    edges.emplace_back(i - 1, j - 1);
  }
  return Graph::from_edges(n, std::move(edges));
}

inline void write_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  write_graph(g, out);
}

inline Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  return read_graph(in);
}

}  // namespace qcadmm
