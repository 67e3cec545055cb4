#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linklab/dense.hpp"
#include "linklab/geometry.hpp"

namespace linklab {

/// Oriented edge-vertex matrix: one row per edge with +1 at the source column
/// and -1 at the target column.
struct OrientedIncidence {
  int n_edges = 0;
  int n_vertices = 0;
  std::vector<std::pair<int, int>> rows;  // (source, target) per edge

  DenseMatrix dense() const;
};

OrientedIncidence oriented_incidence(const LinkGraph& g);

/// B = A^T A, cross-checked entrywise against the combinatorial description:
/// q+1 on the diagonal, -1 on adjacent pairs, 0 otherwise.
DenseMatrix gram_matrix(const OrientedIncidence& a, const LinkGraph& g);

/// Closed-form smallest positive eigenvalue for the three link families.
double expected_gap(LinkKind kind, int q);

struct SpectralReport {
  LinkKind kind = LinkKind::Custom;
  int q = 0;
  int n_vertices = 0;
  std::vector<double> eigenvalues;
  double lambda1 = 0.0;
  std::optional<double> expected;
  std::optional<double> residual;
  int kernel_dim = 0;
};

struct SpectralOptions {
  double kernel_tol = 1e-8;
  JacobiOptions jacobi;
};

/// Full spectrum of B with the gap singled out. Throws Disconnected when the
/// zero eigenvalue is not simple.
SpectralReport spectral_gap(const LinkGraph& g, const SpectralOptions& opts = {});

std::string spectral_report_to_json(const SpectralReport& r);

struct PoincareCheck {
  double df_squared = 0.0;
  double norm_squared = 0.0;
  double lambda1 = 0.0;
  double slack = 0.0;  // df_squared - lambda1 * norm_squared
  bool pass = false;
};

/// ||df||^2 >= lambda1 ||f||^2 for componentwise mean-zero vertex data.
/// `values` is row-major n_vertices x dim. Throws NotMeanZero otherwise.
PoincareCheck verify_poincare(const LinkGraph& g, const std::vector<double>& values, int dim);
PoincareCheck verify_poincare(const LinkGraph& g, const std::vector<double>& values, int dim, double lambda1);

struct MarginReport {
  LinkKind kind;
  int q;
  double lambda;  // q+1-sqrt(q) or q+1-sqrt(2q)
  double margin;  // 2*lambda-(q+1) or 3*lambda-(q+1)
  bool positive;
  bool threshold;  // margin == 0 (the q = 2 symplectic case)
};

/// Slack of the rigidity inequalities: 2*lambda - (q+1) for the triangle
/// case, 3*lambda - (q+1) for the quadrangle case.
MarginReport rigidity_margin(LinkKind kind, int q);

}  // namespace linklab
