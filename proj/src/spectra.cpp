#include "linklab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace linklab {

DenseMatrix OrientedIncidence::dense() const {
  DenseMatrix a(n_edges, n_vertices);
  for (int e = 0; e < n_edges; ++e) {
    a(e, rows[e].first) = 1.0;
    a(e, rows[e].second) = -1.0;
  }
  return a;
}

OrientedIncidence oriented_incidence(const LinkGraph& g) {
  OrientedIncidence a;
  a.n_edges = (int)g.edges.size();
  a.n_vertices = (int)g.vertices.size();
  a.rows = g.edges;
  return a;
}

DenseMatrix gram_matrix(const OrientedIncidence& a, const LinkGraph& g) {
  const int n = a.n_vertices;
  DenseMatrix b(n, n);
  for (const auto& [u, w] : a.rows) {
    b(u, u) += 1.0;
    b(w, w) += 1.0;
    b(u, w) -= 1.0;
    b(w, u) -= 1.0;
  }
  std::set<std::pair<int, int>> adjacent;
  for (const auto& [u, w] : g.edges) {
    adjacent.emplace(std::min(u, w), std::max(u, w));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double want;
      if (i == j)
        want = g.q + 1;
      else
        want = adjacent.count({std::min(i, j), std::max(i, j)}) ? -1.0 : 0.0;
      if (b(i, j) != want)
        fail(errc::structure_mismatch, "A^T A disagrees with the combinatorial Laplacian at (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return b;
}

double expected_gap(LinkKind kind, int q) {
  switch (kind) {
    case LinkKind::Sl3: return q + 1 - std::sqrt((double)q);
    case LinkKind::Sp4Special: return q + 1 - std::sqrt(2.0 * q);
    case LinkKind::Sp4NonSpecial: return q + 1;
    case LinkKind::Custom: break;
  }
  fail(errc::malformed_input, "no closed-form gap for custom graphs");
}

SpectralReport spectral_gap(const LinkGraph& g, const SpectralOptions& opts) {
  SpectralReport r;
  r.kind = g.kind;
  r.q = g.q;
  r.n_vertices = (int)g.vertices.size();

  const auto a = oriented_incidence(g);
  const auto b = gram_matrix(a, g);
  const auto ed = eigh(b, opts.jacobi);
  r.eigenvalues = ed.values;

  r.kernel_dim = 0;
  while (r.kernel_dim < (int)ed.values.size() && std::abs(ed.values[r.kernel_dim]) <= opts.kernel_tol)
    ++r.kernel_dim;
  if (r.kernel_dim == 0) fail(errc::structure_mismatch, "Laplacian kernel is empty");
  if (r.kernel_dim > 1)
    fail(errc::disconnected, "zero eigenvalue has multiplicity " + std::to_string(r.kernel_dim));
  if (r.kernel_dim < (int)ed.values.size()) r.lambda1 = ed.values[r.kernel_dim];

  if (g.kind != LinkKind::Custom) {
    r.expected = expected_gap(g.kind, g.q);
    r.residual = std::abs(r.lambda1 - *r.expected);
  }
  return r;
}

std::string spectral_report_to_json(const SpectralReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = link_kind_name(r.kind);
  j["q"] = r.q;
  j["n_vertices"] = r.n_vertices;
  j["eigenvalues"] = r.eigenvalues;
  j["lambda1"] = r.lambda1;
  if (r.expected) {
    j["expected"] = *r.expected;
    j["residual"] = *r.residual;
  } else {
    j["expected"] = nullptr;
    j["residual"] = nullptr;
  }
  j["kernel_dim"] = r.kernel_dim;
  return j.dump(2) + "\n";
}

PoincareCheck verify_poincare(const LinkGraph& g, const std::vector<double>& values, int dim) {
  return verify_poincare(g, values, dim, spectral_gap(g).lambda1);
}

PoincareCheck verify_poincare(const LinkGraph& g, const std::vector<double>& values, int dim, double lambda1) {
  const int n = (int)g.vertices.size();
  if ((int)values.size() != n * dim) fail(errc::dimension_error, "vertex data has wrong size");
  for (int c = 0; c < dim; ++c) {
    double s = 0.0;
    for (int v = 0; v < n; ++v) s += values[(size_t)v * dim + c];
    if (std::abs(s) > 1e-10) fail(errc::not_mean_zero, "component " + std::to_string(c) + " sums to " + std::to_string(s));
  }
  PoincareCheck out;
  out.lambda1 = lambda1;
  for (const auto& [u, w] : g.edges)
    for (int c = 0; c < dim; ++c) {
      const double d = values[(size_t)u * dim + c] - values[(size_t)w * dim + c];
      out.df_squared += d * d;
    }
  for (double v : values) out.norm_squared += v * v;
  out.slack = out.df_squared - lambda1 * out.norm_squared;
  out.pass = out.slack >= -1e-9;
  return out;
}

MarginReport rigidity_margin(LinkKind kind, int q) {
  if (q < 2) fail(errc::dimension_error, "rigidity margins need q >= 2");
  MarginReport r;
  r.kind = kind;
  r.q = q;
  switch (kind) {
    case LinkKind::Sl3:
      r.lambda = q + 1 - std::sqrt((double)q);
      r.margin = 2.0 * r.lambda - (q + 1);
      break;
    case LinkKind::Sp4Special:
      r.lambda = q + 1 - std::sqrt(2.0 * q);
      r.margin = 3.0 * r.lambda - (q + 1);
      break;
    default:
      fail(errc::malformed_input, "rigidity margin applies to sl3 or sp4-special");
  }
  r.positive = r.margin > 0.0;
  r.threshold = r.margin == 0.0;
  return r;
}

}  // namespace linklab
