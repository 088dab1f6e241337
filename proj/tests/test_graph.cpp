#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "qcadmm/graph.hpp"

using namespace qcadmm;

TEST_CASE("two-node network") {
  Graph g = Graph::from_edges(2, {{0, 1}});
  REQUIRE(g.n() == 2);
  REQUIRE(g.edge_count() == 1);
  REQUIRE(g.degree(0) == 1);
  REQUIRE(g.degree(1) == 1);
  REQUIRE(g.neighbors(0) == std::vector<int>{1});
  REQUIRE(g.neighbors(1) == std::vector<int>{0});
}

TEST_CASE("edge normalization and sorted neighbor lists") {
  Graph g = Graph::from_edges(4, {{2, 0}, {3, 1}, {1, 0}, {3, 2}});
  for (auto [i, j] : g.edges()) REQUIRE(i < j);
  // edge list sorted lexicographically
  REQUIRE(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  for (int i = 0; i < 4; ++i) {
    const auto& nb = g.neighbors(i);
    for (std::size_t k = 0; k + 1 < nb.size(); ++k) REQUIRE(nb[k] < nb[k + 1]);
  }
}

TEST_CASE("degree sum equals twice the edge count") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Graph g = gen_random_connected(12, 30, seed);
    long degsum = 0;
    for (int i = 0; i < g.n(); ++i) degsum += g.degree(i);
    REQUIRE(degsum == 2 * g.edge_count());
  }
}

TEST_CASE("invalid inputs are rejected") {
  REQUIRE_THROWS_AS(Graph::from_edges(1, {}), std::invalid_argument);                 // too small
  REQUIRE_THROWS_AS(Graph::from_edges(3, {{0, 0}, {0, 1}, {1, 2}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Graph::from_edges(3, {{0, 1}, {0, 3}}), std::invalid_argument);   // range
  REQUIRE_THROWS_AS(Graph::from_edges(4, {{0, 1}, {2, 3}}), std::invalid_argument);   // disconnected
  REQUIRE_THROWS_AS(Graph::from_edges(3, {{0, 1}}), std::invalid_argument);           // node 2 isolated
}

TEST_CASE("complete and star families") {
  Graph k5 = complete(5);
  REQUIRE(k5.edge_count() == 10);
  for (int i = 0; i < 5; ++i) REQUIRE(k5.degree(i) == 4);

  Graph s6 = star(6);
  REQUIRE(s6.edge_count() == 5);
  REQUIRE(s6.degree(0) == 5);  // hub
  for (int i = 1; i < 6; ++i) REQUIRE(s6.degree(i) == 1);

  REQUIRE(average_degree(k5) == 4.0);
  REQUIRE_THAT(average_degree(s6), Catch::Matchers::WithinAbs(10.0 / 6.0, 1e-15));
}

TEST_CASE("random generator hits the requested edge count and stays connected") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);  // 2..10
    const long max_e = static_cast<long>(n) * (n - 1) / 2;
    const long e = (n - 1) + static_cast<long>(seed % (max_e - n + 2));
    Graph g = gen_random_connected(n, e, seed);
    REQUIRE(g.n() == n);
    REQUIRE(g.edge_count() == e);
    REQUIRE(g.connected());
    std::set<std::pair<int, int>> uniq(g.edges().begin(), g.edges().end());
    REQUIRE(static_cast<long>(uniq.size()) == e);
  }
}

TEST_CASE("random generator is deterministic in the seed") {
  Graph a = gen_random_connected(20, 60, 12345);
  Graph b = gen_random_connected(20, 60, 12345);
  Graph c = gen_random_connected(20, 60, 12346);
  REQUIRE(a.edges() == b.edges());
  REQUIRE(a.edges() != c.edges());
}

TEST_CASE("generator edge-count bounds") {
  REQUIRE_THROWS_AS(gen_random_connected(5, 3, 1), std::invalid_argument);   // below tree
  REQUIRE_THROWS_AS(gen_random_connected(5, 11, 1), std::invalid_argument);  // above complete
  Graph tree = gen_random_connected(8, 7, 9);
  REQUIRE(tree.connected());
  Graph full = gen_random_connected(6, 15, 9);
  REQUIRE(full.edge_count() == 15);
}

TEST_CASE("edge-list text round-trip") {
  Graph g = gen_random_connected(9, 17, 4);
  std::ostringstream os;
  write_graph(g, os);
  std::istringstream is(os.str());
  Graph back = read_graph(is);
  REQUIRE(back.n() == g.n());
  REQUIRE(back.edges() == g.edges());

  // 1-indexed on disk
  std::istringstream header(os.str());
  int n = 0;
  long e = 0;
  header >> n >> e;
  REQUIRE(n == 9);
  REQUIRE(e == 17);
  int i = 0, j = 0;
  header >> i >> j;
  REQUIRE(i >= 1);
  REQUIRE(j >= 1);
}

TEST_CASE("malformed graph files are rejected with context") {
  std::istringstream empty("");
  REQUIRE_THROWS_AS(read_graph(empty), std::invalid_argument);
  std::istringstream truncated("3 3\n1 2\n2 3\n");
  REQUIRE_THROWS_AS(read_graph(truncated), std::invalid_argument);
  std::istringstream selfloop("2 1\n1 1\n");
  REQUIRE_THROWS_AS(read_graph(selfloop), std::invalid_argument);
}
