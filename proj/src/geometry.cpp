#include "linklab/geometry.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace linklab {

namespace {

using Vec = std::vector<int>;

// Canonical projective representatives of F_q^dim, first nonzero coordinate
// equal to 1, ordered lexicographically by leading-zero count then by the
// remaining coordinates in element-index order.
std::vector<Vec> projective_points(const FiniteField& f, int dim) {
  std::vector<Vec> pts;
  const int q = f.q();
  for (int lead = 0; lead < dim; ++lead) {
    const int free = dim - lead - 1;
    long long count = 1;
    for (int i = 0; i < free; ++i) count *= q;
    for (long long code = 0; code < count; ++code) {
      Vec v(dim, 0);
      v[lead] = f.one();
      long long c = code;
      for (int i = dim - 1; i > lead; --i) {
        v[i] = (int)(c % q);
        c /= q;
      }
      pts.push_back(v);
    }
  }
  return pts;
}

Vec canonical_rep(const FiniteField& f, Vec v) {
  int lead = -1;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) {
      lead = (int)i;
      break;
    }
  if (lead < 0) fail(errc::structure_mismatch, "zero vector has no projective representative");
  const int s = f.inv(v[lead]);
  for (auto& c : v) c = f.mul(c, s);
  return v;
}

int dot(const FiniteField& f, const Vec& a, const Vec& b) {
  int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
  return s;
}

std::string coord_label(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ':';
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace

int symplectic_form(const FiniteField& f, const Vec& x, const Vec& y) {
  // x1 y3 - x3 y1 + x2 y4 - x4 y2
  int s = f.mul(x[0], y[2]);
  s = f.sub(s, f.mul(x[2], y[0]));
  s = f.add(s, f.mul(x[1], y[3]));
  s = f.sub(s, f.mul(x[3], y[1]));
  return s;
}

IncidenceGeometry projective_plane(const FiniteField& field, int order_cap) {
  if (field.q() > order_cap) fail(errc::order_too_large, "field order exceeds cap");
  IncidenceGeometry g;
  g.kind = GeometryKind::ProjectivePlane;
  g.field = field;
  g.dim = 3;
  g.points = projective_points(field, 3);

  const auto duals = g.points;  // same canonical enumeration for functionals
  for (const auto& d : duals) {
    Vec line;
    for (int i = 0; i < (int)g.points.size(); ++i)
      if (dot(field, d, g.points[i]) == 0) line.push_back(i);
    std::sort(line.begin(), line.end());
    g.lines.push_back(line);
    g.line_reps.push_back(d);
  }

  const int q = field.q();
  const int expected = q * q + q + 1;
  if ((int)g.points.size() != expected || (int)g.lines.size() != expected)
    fail(errc::structure_mismatch, "projective plane counts are off");
  for (const auto& l : g.lines)
    if ((int)l.size() != q + 1) fail(errc::structure_mismatch, "plane line of wrong size");
  return g;
}

IncidenceGeometry symplectic_quadrangle(const FiniteField& field, int order_cap) {
  if (field.q() > order_cap) fail(errc::order_too_large, "field order exceeds cap");
  IncidenceGeometry g;
  g.kind = GeometryKind::SymplecticQuadrangle;
  g.field = field;
  g.dim = 4;
  g.points = projective_points(field, 4);

  std::map<Vec, int> point_index;
  for (int i = 0; i < (int)g.points.size(); ++i) point_index[g.points[i]] = i;

  const int q = field.q();
  std::map<Vec, std::pair<Vec, Vec>> seen;  // sorted point-index set -> spanning pair
  for (int i = 0; i < (int)g.points.size(); ++i) {
    for (int j = i + 1; j < (int)g.points.size(); ++j) {
      if (symplectic_form(field, g.points[i], g.points[j]) != 0) continue;
      // Members of the projective line spanned by p_i, p_j.
      Vec members;
      members.push_back(j);
      for (int mu = 0; mu < q; ++mu) {
        Vec v(4);
        for (int c = 0; c < 4; ++c) v[c] = field.add(g.points[i][c], field.mul(mu, g.points[j][c]));
        members.push_back(point_index.at(canonical_rep(field, v)));
      }
      std::sort(members.begin(), members.end());
      if (!seen.count(members)) seen.emplace(members, std::make_pair(g.points[i], g.points[j]));
    }
  }
  for (auto& [members, span] : seen) {
    g.lines.push_back(members);
    Vec rep = span.first;
    rep.insert(rep.end(), span.second.begin(), span.second.end());
    g.line_reps.push_back(rep);
  }

  const int expected = q * q * q + q * q + q + 1;
  if ((int)g.points.size() != expected || (int)g.lines.size() != expected)
    fail(errc::structure_mismatch, "symplectic quadrangle counts are off");
  return g;
}

int LinkGraph::degree(int v) const {
  int d = 0;
  for (const auto& e : edges) d += (e.first == v) + (e.second == v);
  return d;
}

std::vector<std::vector<int>> LinkGraph::adjacency_lists() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto& [u, w] : edges) {
    adj[u].push_back(w);
    adj[w].push_back(u);
  }
  return adj;
}

LinkGraph incidence_graph(const IncidenceGeometry& g) {
  LinkGraph lg;
  lg.kind = g.kind == GeometryKind::ProjectivePlane ? LinkKind::Sl3 : LinkKind::Sp4Special;
  lg.q = g.field.q();
  const int np = (int)g.points.size();
  lg.vertices.reserve(np + g.lines.size());
  for (const auto& p : g.points) lg.vertices.push_back({VertexSide::Point, "p" + coord_label(p)});
  for (size_t l = 0; l < g.lines.size(); ++l)
    lg.vertices.push_back({VertexSide::Line, "l" + coord_label(g.line_reps[l])});
  for (int l = 0; l < (int)g.lines.size(); ++l)
    for (int p : g.lines[l]) lg.edges.emplace_back(p, np + l);
  std::sort(lg.edges.begin(), lg.edges.end());
  return lg;
}

LinkGraph complete_bipartite(int q) {
  if (q < 1) fail(errc::dimension_error, "complete bipartite needs q >= 1");
  LinkGraph lg;
  lg.kind = LinkKind::Sp4NonSpecial;
  lg.q = q;
  for (int i = 0; i <= q; ++i) lg.vertices.push_back({VertexSide::None, "L" + std::to_string(i)});
  for (int i = 0; i <= q; ++i) lg.vertices.push_back({VertexSide::None, "R" + std::to_string(i)});
  for (int i = 0; i <= q; ++i)
    for (int j = 0; j <= q; ++j) lg.edges.emplace_back(i, q + 1 + j);
  return lg;
}

namespace {

int bfs_eccentricity(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> qu;
  dist[src] = 0;
  qu.push(src);
  int ecc = 0;
  while (!qu.empty()) {
    int u = qu.front();
    qu.pop();
    ecc = std::max(ecc, dist[u]);
    for (int w : adj[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        qu.push(w);
      }
  }
  for (int d : dist)
    if (d < 0) return -1;
  return ecc;
}

// Shortest cycle through each edge: remove the edge, find the alternative path.
int graph_girth(const LinkGraph& g) {
  const auto adj = g.adjacency_lists();
  int girth = -1;
  for (const auto& [u, w] : g.edges) {
    std::vector<int> dist(g.vertices.size(), -1);
    std::queue<int> qu;
    dist[u] = 0;
    qu.push(u);
    bool skipped = false;  // drop exactly one copy of the (u,w) edge
    while (!qu.empty() && dist[w] < 0) {
      int a = qu.front();
      qu.pop();
      for (int b : adj[a]) {
        if (a == u && b == w && !skipped) {
          skipped = true;
          continue;
        }
        if (dist[b] < 0) {
          dist[b] = dist[a] + 1;
          qu.push(b);
        }
      }
    }
    if (dist[w] >= 0) {
      const int cycle = dist[w] + 1;
      if (girth < 0 || cycle < girth) girth = cycle;
    }
  }
  return girth;
}

}  // namespace

PolygonValidation validate_generalized_polygon(const LinkGraph& g, int gonality) {
  PolygonValidation r;
  if (g.vertices.empty()) return r;
  const auto adj = g.adjacency_lists();
  r.regular = true;
  for (size_t v = 0; v < adj.size(); ++v)
    if ((int)adj[v].size() != g.q + 1) r.regular = false;
  int diam = 0;
  for (size_t v = 0; v < adj.size() && diam >= 0; ++v) {
    const int ecc = bfs_eccentricity(adj, (int)v);
    diam = ecc < 0 ? -1 : std::max(diam, ecc);
  }
  r.diameter = diam;
  r.girth = graph_girth(g);
  r.pass = r.regular && r.girth == 2 * gonality && r.diameter == gonality;
  return r;
}

std::string link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Sl3: return "sl3";
    case LinkKind::Sp4Special: return "sp4-special";
    case LinkKind::Sp4NonSpecial: return "sp4-nonspecial";
    case LinkKind::Custom: return "custom";
  }
  return "custom";
}

LinkKind link_kind_from_name(const std::string& s) {
  if (s == "sl3") return LinkKind::Sl3;
  if (s == "sp4-special") return LinkKind::Sp4Special;
  if (s == "sp4-nonspecial") return LinkKind::Sp4NonSpecial;
  if (s == "custom") return LinkKind::Custom;
  fail(errc::malformed_input, "unknown link graph kind '" + s + "'");
}

namespace {
std::string side_name(VertexSide s) {
  switch (s) {
    case VertexSide::Point: return "point";
    case VertexSide::Line: return "line";
    case VertexSide::None: return "none";
  }
  return "none";
}
VertexSide side_from_name(const std::string& s) {
  if (s == "point") return VertexSide::Point;
  if (s == "line") return VertexSide::Line;
  if (s == "none") return VertexSide::None;
  fail(errc::malformed_input, "unknown vertex side '" + s + "'");
}
}  // namespace

std::string link_graph_to_json(const LinkGraph& g) {
  nlohmann::ordered_json j;
  j["kind"] = link_kind_name(g.kind);
  j["q"] = g.q;
  j["vertices"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    j["vertices"].push_back({{"id", i}, {"side", side_name(g.vertices[i].side)}, {"label", g.vertices[i].label}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, w] : g.edges) j["edges"].push_back({u, w});
  return j.dump(2) + "\n";
}

LinkGraph link_graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::malformed_input, std::string("graph JSON: ") + e.what());
  }
  LinkGraph g;
  try {
    g.kind = link_kind_from_name(j.at("kind").get<std::string>());
    g.q = j.at("q").get<int>();
    for (const auto& v : j.at("vertices"))
      g.vertices.push_back({side_from_name(v.at("side").get<std::string>()), v.value("label", std::string())});
    for (const auto& e : j.at("edges")) {
      const int u = e.at(0).get<int>();
      const int w = e.at(1).get<int>();
      if (u < 0 || w < 0 || u >= (int)g.vertices.size() || w >= (int)g.vertices.size())
        fail(errc::malformed_input, "edge endpoint out of range");
      g.edges.emplace_back(u, w);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("graph JSON: ") + e.what());
  }
  return g;
}

}  // namespace linklab
