#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qcadmm/graph.hpp"
#include "qcadmm/linalg.hpp"

namespace qcadmm {

// Arc-incidence view of a graph. Arc q < E runs (i, j) with i < j, arc q + E
// runs (j, i). A1 marks arc tails, A2 arc heads; M+ and M- are the unoriented
// and oriented incidence matrices, L+ and L- the signless and signed
// Laplacians, W the diagonal degree matrix.
struct IncidenceSet {
  Matrix a1, a2;            // 2E x N
  Matrix m_plus, m_minus;   // N x 2E
  Matrix l_plus, l_minus;   // N x N
  Matrix w;                 // N x N diagonal
};

inline IncidenceSet build_incidence(const Graph& g) {
  const int n = g.n();
  const long e = g.edge_count();
  IncidenceSet inc;
  inc.a1 = Matrix(static_cast<int>(2 * e), n);
  inc.a2 = Matrix(static_cast<int>(2 * e), n);
  for (long q = 0; q < e; ++q) {
    const auto [i, j] = g.edges()[q];
    inc.a1(static_cast<int>(q), i) = 1.0;
    inc.a2(static_cast<int>(q), j) = 1.0;
    inc.a1(static_cast<int>(q + e), j) = 1.0;
    inc.a2(static_cast<int>(q + e), i) = 1.0;
  }
  const Matrix a1t = transpose(inc.a1);
  const Matrix a2t = transpose(inc.a2);
  inc.m_plus = a1t + a2t;
  inc.m_minus = a1t - a2t;
  inc.l_plus = 0.5 * (inc.m_plus * transpose(inc.m_plus));
  inc.l_minus = 0.5 * (inc.m_minus * transpose(inc.m_minus));
  inc.w = Matrix(n, n);
  for (int i = 0; i < n; ++i) inc.w(i, i) = g.degree(i);
  return inc;
}

// Singular-value quantities controlling the edge-form contraction, computed
// from the N x N Laplacian spectra: sigma_max(M+)^2 = 2*lambda_max(L+) and
// sigma~_min(M-)^2 = 2*lambda_2(L-), since M M^T = 2L for both signs.
struct SpectralBounds {
  double sigma_max_mplus = 0.0;
  double sigma_min_mminus = 0.0;  // smallest nonzero singular value of M-
  double sigma_max_mminus = 0.0;
  double delta = 0.0;             // Q-linear contraction factor
  double rho = 0.0;
};

inline SpectralBounds spectral_bounds(const IncidenceSet& inc, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("spectral_bounds: rho must be positive");
  const int n = inc.l_plus.rows();
  const EighResult ep = jacobi_eigh(inc.l_plus);
  const EighResult em = jacobi_eigh(inc.l_minus);

  // connected graph: L- has eigenvalue 0 with multiplicity 1
  const double scale = std::max(1.0, em.eigenvalues[n - 1]);
  if (n < 2 || em.eigenvalues[1] <= 1e-9 * scale)
    throw std::runtime_error("spectral_bounds: algebraic connectivity is numerically zero");

  SpectralBounds b;
  b.rho = rho;
  b.sigma_max_mplus = std::sqrt(2.0 * ep.eigenvalues[n - 1]);
  b.sigma_min_mminus = std::sqrt(2.0 * em.eigenvalues[1]);
  b.sigma_max_mminus = std::sqrt(2.0 * em.eigenvalues[n - 1]);

  const double smax2 = 2.0 * ep.eigenvalues[n - 1];
  const double smin2 = 2.0 * em.eigenvalues[1];
  b.delta = std::min(smin2 / (2.0 * smax2),
                     4.0 * rho * smin2 / (rho * rho * smax2 * smin2 + 8.0));
  return b;
}

// One synchronous consensus step as a fixed 3N x 3N linear map on the stacked
// state s = [x; alpha; r]:
//
//   D = [ rho*D0*L+        -D0            D0        ]
//       [ rho^2*L-*D0*L+   I - rho*L-*D0  rho*L-*D0 ]
//       [ 0                0              I         ]
//
// with D0 = (I + 2*rho*W)^-1, diagonal.
struct IterationMatrix {
  Matrix d;   // 3N x 3N
  Matrix d0;  // N x N
};

inline IterationMatrix build_iteration_matrix(const IncidenceSet& inc, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("build_iteration_matrix: rho must be positive");
  const int n = inc.w.rows();
  IterationMatrix im;
  im.d0 = Matrix(n, n);
  for (int i = 0; i < n; ++i) im.d0(i, i) = 1.0 / (1.0 + 2.0 * rho * inc.w(i, i));

  const Matrix d0lp = im.d0 * inc.l_plus;      // D0 L+
  const Matrix lmd0 = inc.l_minus * im.d0;     // L- D0
  const Matrix lmd0lp = lmd0 * inc.l_plus;     // L- D0 L+

  im.d = Matrix(3 * n, 3 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      im.d(i, j) = rho * d0lp(i, j);
      im.d(i, n + j) = -im.d0(i, j);
      im.d(i, 2 * n + j) = im.d0(i, j);
      im.d(n + i, j) = rho * rho * lmd0lp(i, j);
      im.d(n + i, n + j) = (i == j ? 1.0 : 0.0) - rho * lmd0(i, j);
      im.d(n + i, 2 * n + j) = rho * lmd0(i, j);
      im.d(2 * n + i, 2 * n + j) = (i == j ? 1.0 : 0.0);
    }
  return im;
}

// D^k for k doubled until successive powers agree to tol in max-norm,
// relative to the matrix magnitude. The limit exists for any connected graph.
inline Matrix iteration_matrix_limit(const IterationMatrix& im, double tol = 1e-10,
                                     int max_pow = 60) {
  Matrix p = im.d;
  for (int it = 0; it < max_pow; ++it) {
    Matrix q = p * p;
    if (max_abs(q - p) <= tol * std::max(1.0, max_abs(q))) return q;
    p = std::move(q);
  }
  throw std::runtime_error("iteration_matrix_limit: no convergence within " +
                           std::to_string(max_pow) + " doublings");
}

// Least-squares residual of L- b = alpha via the pseudo-inverse, plus the
// projection onto the all-ones direction. Both vanish exactly when alpha lies
// in the column space of L-, which is the initialization condition.
inline double column_space_residual(const Matrix& l_minus, const Vec& alpha) {
  const int n = l_minus.rows();
  if (static_cast<int>(alpha.size()) != n)
    throw std::invalid_argument("column_space_residual: dimension mismatch");
  const EighResult e = jacobi_eigh(l_minus);
  const double scale = std::max(1.0, std::abs(e.eigenvalues[n - 1]));
  // b = V diag(1/lambda) V^T alpha over nonzero eigenvalues
  Vec b(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (std::abs(e.eigenvalues[k]) <= 1e-9 * scale) continue;
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += e.eigenvectors(i, k) * alpha[i];
    c /= e.eigenvalues[k];
    for (int i = 0; i < n; ++i) b[i] += c * e.eigenvectors(i, k);
  }
  Vec resid = l_minus * b;
  for (int i = 0; i < n; ++i) resid[i] -= alpha[i];
  return norm2(resid);
}

}  // namespace qcadmm
