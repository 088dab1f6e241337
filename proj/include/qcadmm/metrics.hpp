#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qcadmm/linalg.hpp"

namespace qcadmm {

inline double data_average(const Vec& r) {
  if (r.empty()) throw std::invalid_argument("data_average: empty vector");
  double s = 0.0;
  for (double v : r) s += v;
  return s / static_cast<double>(r.size());
}

// ||x - 1*x_avg||_2 / sqrt(N); equals the consensus error once a consensus
// is reached.
inline double iterative_error(const Vec& xq, double x_avg) {
  double s = 0.0;
  for (double v : xq) s += (v - x_avg) * (v - x_avg);
  return std::sqrt(s / static_cast<double>(xq.size()));
}

// (1/2 + rho*2E/N) * delta
inline double error_bound(double rho, long e, int n, double delta) {
  return (0.5 + rho * 2.0 * static_cast<double>(e) / static_cast<double>(n)) * delta;
}

// Block-weighted metric under which the edge-form iterate u = [z; beta]
// contracts: ||u||_G^2 = rho*||z||^2 + (1/rho)*||beta||^2.
struct GMetric {
  double rho = 1.0;
  int dimension = 0;  // 2E; u stacks two blocks of this size
};

inline double g_norm_sq(const Vec& u, const GMetric& gm) {
  if (static_cast<int>(u.size()) != 2 * gm.dimension)
    throw std::invalid_argument("g_norm_sq: expected stacked [z; beta] of length 2*dimension");
  double z2 = 0.0, b2 = 0.0;
  for (int i = 0; i < gm.dimension; ++i) z2 += u[i] * u[i];
  for (int i = gm.dimension; i < 2 * gm.dimension; ++i) b2 += u[i] * u[i];
  return gm.rho * z2 + b2 / gm.rho;
}

// f(x) = 1/2 ||x - r||^2, minimized over the consensus set at 1*x_avg.
inline double objective_value(const Vec& x, const Vec& r) {
  if (x.size() != r.size()) throw std::invalid_argument("objective_value: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - r[i]) * (x[i] - r[i]);
  return 0.5 * s;
}

}  // namespace qcadmm
