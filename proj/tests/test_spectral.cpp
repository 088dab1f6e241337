#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qcadmm/graph.hpp"
#include "qcadmm/linalg.hpp"
#include "qcadmm/rng.hpp"
#include "qcadmm/spectral.hpp"

using namespace qcadmm;

namespace {

// Independent largest-eigenvalue oracle: plain power iteration on a
// symmetric positive semidefinite matrix.
double power_lambda_max(const Matrix& a, std::uint64_t seed = 1, int iters = 20000) {
  const int n = a.rows();
  RngStream rng(seed);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.next_double() + 0.1;
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = a * v;
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    lam = dot(v, a * v);
  }
  return lam;
}

// Independent second-smallest-eigenvalue oracle for a Laplacian-like PSD
// matrix with known null vector 1: power iteration on (c*I - L) restricted
// to the complement of span{1}.
double power_lambda2(const Matrix& l, std::uint64_t seed = 2, int iters = 20000) {
  const int n = l.rows();
  const double c = power_lambda_max(l, seed) + 1.0;
  RngStream rng(seed + 7);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.next_double() - 0.5;
  auto deflate = [&](Vec& x) {
    double mean = 0.0;
    for (double e : x) mean += e;
    mean /= n;
    for (double& e : x) e -= mean;
  };
  deflate(v);
  double mu = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = l * v;
    for (int i = 0; i < n; ++i) w[i] = c * v[i] - w[i];
    deflate(w);
    const double nw = norm2(w);
    if (nw == 0.0) return c;
    for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    mu = dot(v, l * v);
  }
  return mu;
}

}  // namespace

TEST_CASE("two-node incidence structure, exact") {
  Graph g = Graph::from_edges(2, {{0, 1}});
  IncidenceSet inc = build_incidence(g);
  REQUIRE(inc.a1.rows() == 2);  // two arcs
  REQUIRE(inc.a1.cols() == 2);
  // arc 0 = (0,1): tail 0, head 1; arc 1 = (1,0): tail 1, head 0
  REQUIRE(inc.a1(0, 0) == 1.0);
  REQUIRE(inc.a1(1, 1) == 1.0);
  REQUIRE(inc.a2(0, 1) == 1.0);
  REQUIRE(inc.a2(1, 0) == 1.0);

  // M+ = [[1,1],[1,1]], M- = [[1,-1],[-1,1]]
  REQUIRE(inc.m_plus(0, 0) == 1.0);
  REQUIRE(inc.m_plus(0, 1) == 1.0);
  REQUIRE(inc.m_plus(1, 0) == 1.0);
  REQUIRE(inc.m_plus(1, 1) == 1.0);
  REQUIRE(inc.m_minus(0, 0) == 1.0);
  REQUIRE(inc.m_minus(0, 1) == -1.0);
  REQUIRE(inc.m_minus(1, 0) == -1.0);
  REQUIRE(inc.m_minus(1, 1) == 1.0);

  // L+ = W + Adj, L- = W - Adj with W = I
  REQUIRE(inc.l_plus(0, 0) == 1.0);
  REQUIRE(inc.l_plus(0, 1) == 1.0);
  REQUIRE(inc.l_minus(0, 0) == 1.0);
  REQUIRE(inc.l_minus(0, 1) == -1.0);
  REQUIRE(inc.w(0, 0) == 1.0);
  REQUIRE(inc.w(0, 1) == 0.0);
}

TEST_CASE("incidence identities hold on random networks") {
  for (std::uint64_t seed : {3ull, 4ull, 5ull, 6ull}) {
    Graph g = gen_random_connected(4 + static_cast<int>(seed), 2 * (4 + seed), seed);
    IncidenceSet inc = build_incidence(g);
    const int n = g.n();
    const long e2 = 2 * g.edge_count();
    REQUIRE(inc.a1.rows() == e2);
    REQUIRE(inc.m_plus.rows() == n);
    REQUIRE(inc.m_plus.cols() == e2);

    // M+ = A1^T + A2^T, M- = A1^T - A2^T
    REQUIRE(max_abs(inc.m_plus - (transpose(inc.a1) + transpose(inc.a2))) == 0.0);
    REQUIRE(max_abs(inc.m_minus - (transpose(inc.a1) - transpose(inc.a2))) == 0.0);

    // L+ = M+ M+^T / 2, L- = M- M-^T / 2, W = (L+ + L-)/2 diagonal of degrees
    REQUIRE(max_abs(inc.l_plus - 0.5 * (inc.m_plus * transpose(inc.m_plus))) < 1e-12);
    REQUIRE(max_abs(inc.l_minus - 0.5 * (inc.m_minus * transpose(inc.m_minus))) < 1e-12);
    REQUIRE(max_abs(inc.w - 0.5 * (inc.l_plus + inc.l_minus)) < 1e-12);
    for (int i = 0; i < n; ++i) {
      REQUIRE(inc.w(i, i) == static_cast<double>(g.degree(i)));
      for (int j = 0; j < n; ++j)
        if (i != j) REQUIRE(inc.w(i, j) == 0.0);
    }

    // both signed and signless Laplacians are positive semidefinite, and
    // the signed one annihilates the all-ones vector
    RngStream rng(seed * 17 + 1);
    for (int t = 0; t < 100; ++t) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = 2.0 * rng.next_double() - 1.0;
      REQUIRE(dot(x, inc.l_plus * x) >= -1e-12);
      REQUIRE(dot(x, inc.l_minus * x) >= -1e-12);
    }
    Vec ones(n, 1.0);
    REQUIRE(norm2(inc.l_minus * ones) < 1e-12);
  }
}

TEST_CASE("two-node spectral quantities, exact") {
  Graph g = Graph::from_edges(2, {{0, 1}});
  IncidenceSet inc = build_incidence(g);
  SpectralBounds sb = spectral_bounds(inc, 1.0);
  REQUIRE_THAT(sb.sigma_max_mplus, Catch::Matchers::WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(sb.sigma_min_mminus, Catch::Matchers::WithinAbs(2.0, 1e-12));
  // min{ 4/(2*4), 4*4/(4*4 + 8) } = min{ 1/2, 2/3 } = 1/2
  REQUIRE_THAT(sb.delta, Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("complete-graph spectra match closed forms") {
  // K4: signed Laplacian eigenvalues {0,4,4,4}; signless {2,2,2,6}
  Graph g = complete(4);
  IncidenceSet inc = build_incidence(g);
  auto egm = jacobi_eigh(inc.l_minus);
  REQUIRE_THAT(egm.eigenvalues[0], Catch::Matchers::WithinAbs(0.0, 1e-12));
  for (int i = 1; i < 4; ++i)
    REQUIRE_THAT(egm.eigenvalues[i], Catch::Matchers::WithinAbs(4.0, 1e-10));
  auto egp = jacobi_eigh(inc.l_plus);
  for (int i = 0; i < 3; ++i)
    REQUIRE_THAT(egp.eigenvalues[i], Catch::Matchers::WithinAbs(2.0, 1e-10));
  REQUIRE_THAT(egp.eigenvalues[3], Catch::Matchers::WithinAbs(6.0, 1e-10));

  SpectralBounds sb = spectral_bounds(inc, 1.0);
  REQUIRE_THAT(sb.sigma_max_mplus * sb.sigma_max_mplus, Catch::Matchers::WithinAbs(12.0, 1e-9));
  REQUIRE_THAT(sb.sigma_min_mminus * sb.sigma_min_mminus, Catch::Matchers::WithinAbs(8.0, 1e-9));
}

TEST_CASE("star-graph signed Laplacian spectrum") {
  // star on N nodes: eigenvalues {0, 1 (xN-2), N}
  Graph g = star(6);
  IncidenceSet inc = build_incidence(g);
  auto eg = jacobi_eigh(inc.l_minus);
  REQUIRE_THAT(eg.eigenvalues[0], Catch::Matchers::WithinAbs(0.0, 1e-12));
  for (int i = 1; i < 5; ++i)
    REQUIRE_THAT(eg.eigenvalues[i], Catch::Matchers::WithinAbs(1.0, 1e-10));
  REQUIRE_THAT(eg.eigenvalues[5], Catch::Matchers::WithinAbs(6.0, 1e-10));
}

TEST_CASE("spectral bounds agree with an independent power-iteration oracle") {
  for (std::uint64_t seed : {10ull, 11ull, 12ull}) {
    Graph g = gen_random_connected(12, 26, seed);
    IncidenceSet inc = build_incidence(g);
    for (double rho : {0.5, 1.0, 2.0}) {
      SpectralBounds sb = spectral_bounds(inc, rho);
      const double smax2 = 2.0 * power_lambda_max(inc.l_plus, seed);
      const double smin2 = 2.0 * power_lambda2(inc.l_minus, seed);
      REQUIRE_THAT(sb.sigma_max_mplus * sb.sigma_max_mplus,
                   Catch::Matchers::WithinRel(smax2, 1e-8));
      REQUIRE_THAT(sb.sigma_min_mminus * sb.sigma_min_mminus,
                   Catch::Matchers::WithinRel(smin2, 1e-8));
      const double expected = std::min(
          smin2 / (2.0 * smax2), 4.0 * rho * smin2 / (rho * rho * smax2 * smin2 + 8.0));
      REQUIRE_THAT(sb.delta, Catch::Matchers::WithinRel(expected, 1e-7));
      REQUIRE(sb.delta > 0.0);
    }
  }
}

TEST_CASE("iteration matrix blocks and the averaging limit") {
  Graph g = gen_random_connected(5, 8, 21);
  IncidenceSet inc = build_incidence(g);
  const int n = g.n();
  const double rho = 1.0;
  IterationMatrix im = build_iteration_matrix(inc, rho);
  REQUIRE(im.d.rows() == 3 * n);

  // the stacked state moves exactly as the node updates do
  // (top block row: D0 (rho L+ xq - alpha + r))
  for (int i = 0; i < n; ++i) {
    const double d0 = 1.0 / (1.0 + 2.0 * rho * g.degree(i));
    REQUIRE_THAT(im.d0(i, i), Catch::Matchers::WithinAbs(d0, 1e-14));
  }

  Matrix dstar = iteration_matrix_limit(im);
  // limit block structure: first column of blocks vanishes, data column
  // carries the average
  for (int i = 0; i < 3 * n; ++i)
    for (int j = 0; j < n; ++j) REQUIRE_THAT(dstar(i, j), Catch::Matchers::WithinAbs(0.0, 1e-8));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      REQUIRE_THAT(dstar(i, 2 * n + j), Catch::Matchers::WithinAbs(1.0 / n, 1e-8));
      const double expected = (i == j ? 1.0 : 0.0) - 1.0 / n;
      REQUIRE_THAT(dstar(n + i, 2 * n + j), Catch::Matchers::WithinAbs(expected, 1e-8));
      REQUIRE_THAT(dstar(2 * n + i, j), Catch::Matchers::WithinAbs(0.0, 1e-12));
      const double id = (i == j ? 1.0 : 0.0);
      REQUIRE_THAT(dstar(2 * n + i, 2 * n + j), Catch::Matchers::WithinAbs(id, 1e-12));
    }
  // the alpha-column blocks have identical columns (rank-one structure)
  for (int j = n; j < 2 * n; ++j)
    for (int i = 0; i < 2 * n; ++i)
      REQUIRE_THAT(dstar(i, j), Catch::Matchers::WithinAbs(dstar(i, n), 1e-8));
}

TEST_CASE("column-space membership residual") {
  Graph g = gen_random_connected(6, 9, 31);
  IncidenceSet inc = build_incidence(g);
  // anything of the form L- y is in the column space
  RngStream rng(8);
  Vec y(6);
  for (double& v : y) v = rng.next_normal();
  Vec alpha = inc.l_minus * y;
  REQUIRE(column_space_residual(inc.l_minus, alpha) < 1e-9);
  // the all-ones vector is orthogonal to it
  Vec ones(6, 1.0);
  REQUIRE(column_space_residual(inc.l_minus, ones) > 1.0);
}

TEST_CASE("disconnected input is rejected by the bounds computation") {
  // a path graph has positive connectivity; removing the bridge is caught at
  // construction, so emulate the failure with a near-zero second eigenvalue
  // by feeding an unconnected Laplacian directly
  Matrix l(4, 4);
  // two separate components {0,1}, {2,3}
  l(0, 0) = 1; l(0, 1) = -1; l(1, 0) = -1; l(1, 1) = 1;
  l(2, 2) = 1; l(2, 3) = -1; l(3, 2) = -1; l(3, 3) = 1;
  IncidenceSet fake;
  fake.l_plus = l;   // dims only; values irrelevant for the failure path
  fake.l_minus = l;
  fake.m_plus = Matrix(4, 4);
  fake.m_minus = Matrix(4, 4);
  fake.a1 = Matrix(4, 4);
  fake.a2 = Matrix(4, 4);
  fake.w = Matrix(4, 4);
  REQUIRE_THROWS_AS(spectral_bounds(fake, 1.0), std::runtime_error);
}
