#pragma once

#include <string>
#include <vector>

#include "linklab/finite_field.hpp"

namespace linklab {

enum class GeometryKind { ProjectivePlane, SymplecticQuadrangle };

/// Point-line incidence geometry over a finite field.
///
/// Points are canonical projective representatives (first nonzero coordinate
/// scaled to 1) listed in a fixed enumeration order; lines are stored as
/// sorted vectors of point indices. Both orders are deterministic so that all
/// derived graphs and reports are reproducible byte for byte.
struct IncidenceGeometry {
  GeometryKind kind;
  FiniteField field;
  int dim;                                  // ambient vector-space dimension (3 or 4)
  std::vector<std::vector<int>> points;     // coordinate vectors, field-element indices
  std::vector<std::vector<int>> lines;      // sorted point indices
  std::vector<std::vector<int>> line_reps;  // for the plane: dual functional coords; for the
                                            // quadrangle: the two spanning point coordinates
                                            // concatenated (reduced echelon basis)
};

/// PG(2,q): points and lines of the projective plane.
IncidenceGeometry projective_plane(const FiniteField& field, int order_cap = FiniteField::kDefaultOrderCap);

/// W(q): all points of PG(3,q) and the totally isotropic lines of the
/// symplectic form <x,y> = x1 y3 - x3 y1 + x2 y4 - x4 y2.
IncidenceGeometry symplectic_quadrangle(const FiniteField& field, int order_cap = FiniteField::kDefaultOrderCap);

/// Value of the symplectic form on two coordinate vectors (index 0 exposed
/// for tests; uses the fixed convention above).
int symplectic_form(const FiniteField& f, const std::vector<int>& x, const std::vector<int>& y);

enum class LinkKind { Sl3, Sp4Special, Sp4NonSpecial, Custom };

enum class VertexSide { Point, Line, None };

/// Finite (q+1)-regular bipartite graph modelling a vertex link.
/// Edge orientation is canonical: point side -> line side.
struct LinkGraph {
  LinkKind kind = LinkKind::Custom;
  int q = 0;
  struct Vertex {
    VertexSide side = VertexSide::None;
    std::string label;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;

  int degree(int v) const;
  std::vector<std::vector<int>> adjacency_lists() const;
};

/// One graph vertex per point and per line, edges for incident pairs.
LinkGraph incidence_graph(const IncidenceGeometry& g);

/// K_{q+1,q+1} with edges oriented left -> right.
LinkGraph complete_bipartite(int q);

struct PolygonValidation {
  int girth = -1;     // -1 when acyclic
  int diameter = -1;  // -1 when disconnected
  bool regular = false;
  bool pass = false;
};

/// Checks the generalized-n-gon conditions: girth 2n, diameter n, and
/// (q+1)-regularity.
PolygonValidation validate_generalized_polygon(const LinkGraph& g, int gonality);

std::string link_kind_name(LinkKind k);
LinkKind link_kind_from_name(const std::string& s);

std::string link_graph_to_json(const LinkGraph& g);
LinkGraph link_graph_from_json(const std::string& text);

}  // namespace linklab
