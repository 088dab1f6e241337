#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcadmm {

using Vec = std::vector<double>;

// Dense row-major double matrix. Desk-scale sizes only (N up to a few
// hundred), so no sparse storage or blocking.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }

  bool operator==(const Matrix& o) const = default;

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vec operator*(const Matrix& a, const Vec& x) {
  if (a.cols() != static_cast<int>(x.size()))
    throw std::invalid_argument("matrix-vector product: dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: dimension mismatch");
  Matrix c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: dimension mismatch");
  Matrix c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

inline Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

struct EighResult {
  Vec eigenvalues;      // ascending
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]
};

// Cyclic Jacobi eigendecomposition for symmetric matrices. Sweeps rotate
// every off-diagonal pair; converged when the off-diagonal Frobenius norm
// drops below 1e-12 relative to the input Frobenius norm.
inline EighResult jacobi_eigh(const Matrix& sym, double rel_tol = 1e-12, int max_sweeps = 100) {
  if (sym.rows() != sym.cols()) throw std::invalid_argument("jacobi_eigh: matrix not square");
  const int n = sym.rows();
  Matrix a = sym;
  Matrix v = Matrix::identity(n);

  double fro = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fro += a(i, j) * a(i, j);
  fro = std::sqrt(fro);
  const double stop = rel_tol * std::max(fro, 1e-300);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop / (n * n + 1.0)) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double h = t * apq;

        a(p, p) -= h;
        a(q, q) += h;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == p || j == q) continue;
          const double g = a(p, j);
          const double hh = a(q, j);
          a(p, j) = g - s * (hh + g * tau);
          a(q, j) = hh + s * (g - hh * tau);
          a(j, p) = a(p, j);
          a(j, q) = a(q, j);
        }
        for (int j = 0; j < n; ++j) {
          const double g = v(j, p);
          const double hh = v(j, q);
          v(j, p) = g - s * (hh + g * tau);
          v(j, q) = hh + s * (g - hh * tau);
        }
      }
    }
  }
  if (off_norm() > stop)
    throw std::runtime_error("jacobi_eigh: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps (off-diagonal " + std::to_string(off_norm()) + ")");

  EighResult r;
  r.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) r.eigenvalues[i] = a(i, i);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return r.eigenvalues[x] < r.eigenvalues[y]; });
  Vec ev(n);
  Matrix vv(n, n);
  for (int i = 0; i < n; ++i) {
    ev[i] = r.eigenvalues[order[i]];
    for (int j = 0; j < n; ++j) vv(j, i) = v(j, order[i]);
  }
  r.eigenvalues = std::move(ev);
  r.eigenvectors = std::move(vv);
  return r;
}

}  // namespace qcadmm
