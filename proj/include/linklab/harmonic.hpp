#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linklab/cat0.hpp"
#include "linklab/geometry.hpp"

namespace linklab {

enum class VertexClass { Generic, Special, NonSpecial };

struct VoltageEdge {
  int from, to;
  Isometry voltage;  // transports the value at `to` into the chart of `from`
};

struct Triangle {
  std::array<int, 3> edge;
  std::array<bool, 3> reversed;  // traversal direction per edge, forming a closed walk
};

/// Finite 2-complex with isometry-valued edge voltages. Loops and parallel
/// edges are allowed; triangles are closed edge walks whose voltage product
/// must be the identity.
struct VoltageComplex {
  ModelSpace space;
  std::vector<VertexClass> classes;
  std::vector<VoltageEdge> edges;
  std::vector<Triangle> triangles;
  std::optional<int> q;

  int n_vertices() const { return (int)classes.size(); }
};

/// Vertex values of an equivariant map, one point per fundamental-domain vertex.
struct EquivariantMap {
  std::vector<Point> values;
};

/// Holonomy and class checks; throws BadHolonomy / ClassViolation / MalformedInput.
void validate_complex(const VoltageComplex& c, double holonomy_tol = 1e-9);

VoltageComplex load_complex(const std::string& json_text);
std::string complex_to_json(const VoltageComplex& c);

EquivariantMap map_from_json(const ModelSpace& space, const std::string& json_text);
std::string map_to_json(const ModelSpace& space, const EquivariantMap& f);

/// Constant map at the canonical base point.
EquivariantMap constant_map(const VoltageComplex& c);
EquivariantMap random_map(const VoltageComplex& c, uint64_t seed, double scale = 1.0);

/// Sum over edges (u,v,g) of d(f(u), g f(v))^2; loops contribute d(f(u), g f(u))^2.
double energy(const VoltageComplex& c, const EquivariantMap& f);

/// Transported neighbour values seen from v. Each non-loop incidence yields
/// one entry; each loop at v yields two (both traversal directions).
std::vector<Point> neighbor_targets(const VoltageComplex& c, const EquivariantMap& f, int v);

/// Tangents log(f(v), target) for each entry of neighbor_targets.
std::vector<Tangent> differential(const VoltageComplex& c, const EquivariantMap& f, int v);

/// max over vertices of || sum_u Df|_v(u) ||; zero iff first-order critical.
double gradient_residual(const VoltageComplex& c, const EquivariantMap& f);

enum class DescentStatus { Converged, MaxIter, Diverging };

struct DescentOptions {
  int max_iter = 5000;
  double energy_tol = 1e-12;  // per-sweep energy decrease threshold
  double grad_tol = 1e-6;     // residual required to declare convergence
  double radius = 1e3;        // drift bound around the initial data
  bool jacobi = false;        // simultaneous updates instead of Gauss-Seidel
};

struct DescentResult {
  EquivariantMap map;
  std::vector<double> trace;  // energy after each sweep
  DescentStatus status = DescentStatus::MaxIter;
  double final_energy = 0.0;
  double residual = 0.0;
  int sweeps = 0;
};

/// Gauss-Seidel sweeps moving each vertex to the Fréchet mean of its
/// transported neighbours, with a line search that keeps the energy trace
/// non-increasing even in the presence of loops.
DescentResult harmonic_descent(const VoltageComplex& c, const EquivariantMap& f0, const DescentOptions& opts = {});

std::string descent_result_to_json(const DescentResult& r, std::optional<uint64_t> seed = std::nullopt);

/// Link graph of a vertex on darts: one link vertex per incident
/// edge-endpoint, one link edge per triangle corner at v.
LinkGraph extract_link_graph(const VoltageComplex& c, int v);

struct ChainVertexEntry {
  int vertex;
  double lhs;    // sum over link edges of ||Df_v(u) - Df_v(w)||^2
  double rhs;    // sum over link edges of d(f(u), f(w))^2 in the chart of v
  double slack;  // rhs - lhs, nonnegative in nonpositive curvature
};

/// Report on the local-to-global energy comparison chain: per-vertex
/// first-order comparison, the (q+1) edge counting identity, and the spectral
/// lower bound that applies when the map is critical.
struct ChainReport {
  int q = 0;
  double energy = 0.0;
  std::vector<ChainVertexEntry> per_vertex;
  double sum_lhs = 0.0, sum_rhs = 0.0;
  double eq1_min_slack = 0.0;
  double eq2_identity_residual = 0.0;  // |sum_rhs - (q+1) E|
  double gradient_residual = 0.0;
  bool harmonic = false;  // residual <= grad tolerance, gates the spectral bound

  // Single-class complexes
  std::optional<double> lambda;
  std::optional<double> eq3_slack;  // sum_lhs - 2 lambda E

  // Special/non-special split
  bool classed = false;
  double e1 = 0.0, e2 = 0.0;  // special-special and special-nonspecial energies
  double sum_lhs_special = 0.0, sum_rhs_special = 0.0;
  double sum_lhs_nonspecial = 0.0, sum_rhs_nonspecial = 0.0;
  double eq2_special_residual = 0.0;     // |sum_rhs_special - (q+1) e2|
  double eq2_nonspecial_residual = 0.0;  // |sum_rhs_nonspecial - (q+1) e1|
  std::optional<double> eq3_special_slack;     // sum_lhs_special - lambda_S (2 e1 + e2)
  std::optional<double> eq3_nonspecial_slack;  // sum_lhs_nonspecial - lambda_NS e2
  std::optional<double> split_slack;           // e1 - e2, meaningful for critical maps
};

ChainReport wang_chain_report(const VoltageComplex& c, const EquivariantMap& f,
                              const std::map<VertexClass, double>& lambda_by_class);

std::string chain_report_to_json(const ChainReport& r);

std::string vertex_class_name(VertexClass c);
VertexClass vertex_class_from_name(const std::string& s);

}  // namespace linklab
