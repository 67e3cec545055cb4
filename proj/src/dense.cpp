#include "linklab/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace linklab {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols_ != b.rows_) fail(errc::dimension_error, "matrix product shape mismatch");
  DenseMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(errc::dimension_error, "matrix sum shape mismatch");
  DenseMatrix c = a;
  for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(errc::dimension_error, "matrix diff shape mismatch");
  DenseMatrix c = a;
  for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

DenseMatrix DenseMatrix::scaled(double s) const {
  DenseMatrix c = *this;
  for (double& v : c.a_) v *= s;
  return c;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::frobenius() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

bool DenseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

namespace {

double off_diagonal_frobenius(const DenseMatrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigh(const DenseMatrix& m, const JacobiOptions& opts) {
  const int n = m.rows();
  if (n != m.cols()) fail(errc::not_symmetric, "matrix is not square");
  if (n > opts.max_dimension) fail(errc::dimension_error, "dimension exceeds eigensolver cap");
  const double scale = std::max(1.0, m.max_abs());
  if (!m.is_symmetric(opts.symmetry_tol * scale)) fail(errc::not_symmetric, "matrix is not symmetric");

  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);
  const double norm = a.frobenius();
  const double target = opts.rel_off_tol * (norm > 0 ? norm : 1.0);

  bool converged = (n <= 1) || off_diagonal_frobenius(a) <= target;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= target / ((double)n * n)) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = aip - s * (aiq + tau * aip);
            a(i, q) = aiq + s * (aip - tau * aiq);
            a(p, i) = a(i, p);
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
    converged = off_diagonal_frobenius(a) <= target;
  }
  if (!converged) fail(errc::no_convergence, "Jacobi sweeps exhausted");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  EigenDecomposition ed;
  ed.values.resize(n);
  ed.vectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    ed.values[j] = a(order[j], order[j]);
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = v(i, order[j]);
      if (std::abs(x) > best) {
        best = std::abs(x);
        arg = i;
      }
    }
    const double sgn = v(arg, order[j]) >= 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) ed.vectors(i, j) = sgn * v(i, order[j]);
  }
  return ed;
}

double eigh_residual(const DenseMatrix& m, const EigenDecomposition& ed) {
  const int n = m.rows();
  DenseMatrix rec(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double w = ed.values[j] * ed.vectors(i, j);
      for (int k = 0; k < n; ++k) rec(i, k) += w * ed.vectors(k, j);
    }
  return (rec - m).max_abs();
}

std::vector<double> solve_linear(DenseMatrix a, std::vector<double> b) {
  const int n = a.rows();
  if (a.cols() != n || (int)b.size() != n) fail(errc::dimension_error, "solve_linear shape mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-14) fail(errc::rank_deficient, "singular system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
  return x;
}

DenseMatrix inverse(const DenseMatrix& a) {
  const int n = a.rows();
  if (a.cols() != n) fail(errc::dimension_error, "inverse of non-square matrix");
  DenseMatrix inv(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    auto col = solve_linear(a, std::move(e));
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace linklab
