#pragma once

#include <cstddef>
#include <vector>

#include "linklab/errors.hpp"

namespace linklab {

/// Dense row-major real matrix. Sizes in this project stay small (<= 2000),
/// so everything is plain O(n^3) with no blocking.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols), a_((size_t)rows * cols, fill) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[(size_t)i * cols_ + j]; }
  double operator()(int i, int j) const { return a_[(size_t)i * cols_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  DenseMatrix transposed() const;
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  DenseMatrix scaled(double s) const;

  double max_abs() const;
  double frobenius() const;
  bool is_symmetric(double tol) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j pairs with values[j]
};

struct JacobiOptions {
  // Converged when the off-diagonal Frobenius norm falls below
  // rel_off_tol * ||M||_F.
  double rel_off_tol = 1e-13;
  int max_sweeps = 100;
  int max_dimension = 2000;
  double symmetry_tol = 1e-12;
};

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues ascend; eigenvector columns are orthonormal and sign-fixed
/// (largest-magnitude entry positive) so output is deterministic.
EigenDecomposition eigh(const DenseMatrix& m, const JacobiOptions& opts = {});

/// max|Q diag(v) Q^T - M|, the reconstruction residual of a decomposition.
double eigh_residual(const DenseMatrix& m, const EigenDecomposition& ed);

/// Solve a.x = b by partial-pivot Gaussian elimination (small systems only).
std::vector<double> solve_linear(DenseMatrix a, std::vector<double> b);

DenseMatrix inverse(const DenseMatrix& a);

}  // namespace linklab
