#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "linklab/geometry.hpp"

using namespace linklab;

namespace {

// Brute-force count of 1-dimensional subspaces of F_q^dim: enumerate all
// nonzero vectors and deduplicate by scalar multiples.
int count_subspaces_bruteforce(const FiniteField& f, int dim) {
  const int q = f.q();
  long long total = 1;
  for (int i = 0; i < dim; ++i) total *= q;
  std::set<std::vector<int>> reps;
  for (long long code = 1; code < total; ++code) {
    std::vector<int> v(dim);
    long long c = code;
    for (int i = 0; i < dim; ++i) {
      v[i] = (int)(c % q);
      c /= q;
    }
    std::set<std::vector<int>> orbit;
    for (int s = 1; s < q; ++s) {
      std::vector<int> w(dim);
      for (int i = 0; i < dim; ++i) w[i] = f.mul(v[i], s);
      orbit.insert(w);
    }
    reps.insert(*orbit.begin());
  }
  return (int)reps.size();
}

}  // namespace

TEST_CASE("Fano plane and PG(2,3)") {
  const auto f2 = FiniteField::create(2, 1);
  const auto fano = projective_plane(f2);
  CHECK(fano.points.size() == 7);
  CHECK(fano.lines.size() == 7);
  CHECK(count_subspaces_bruteforce(f2, 3) == 7);

  const auto f3 = FiniteField::create(3, 1);
  const auto pg3 = projective_plane(f3);
  CHECK(pg3.points.size() == 13);
  CHECK(pg3.lines.size() == 13);
  CHECK(count_subspaces_bruteforce(f3, 3) == 13);
}

TEST_CASE("collinear points of the Fano plane") {
  const auto f2 = FiniteField::create(2, 1);
  const auto g = projective_plane(f2);
  // (1,0,0), (0,1,0), (1,1,0) all lie in the kernel of the z functional.
  std::vector<int> want;
  for (const std::vector<int>& target : {std::vector<int>{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}) {
    const auto it = std::find(g.points.begin(), g.points.end(), target);
    REQUIRE(it != g.points.end());
    want.push_back((int)(it - g.points.begin()));
  }
  std::sort(want.begin(), want.end());
  bool found = false;
  for (const auto& line : g.lines) {
    if (std::includes(line.begin(), line.end(), want.begin(), want.end())) found = true;
  }
  CHECK(found);
}

TEST_CASE("two distinct points lie on exactly one common line") {
  const auto f3 = FiniteField::create(3, 1);
  const auto g = projective_plane(f3);
  for (size_t a = 0; a < g.points.size(); ++a)
    for (size_t b = a + 1; b < g.points.size(); ++b) {
      int common = 0;
      for (const auto& line : g.lines) {
        const bool ha = std::binary_search(line.begin(), line.end(), (int)a);
        const bool hb = std::binary_search(line.begin(), line.end(), (int)b);
        if (ha && hb) ++common;
      }
      CHECK(common == 1);
    }
}

TEST_CASE("W(2) and W(3) counts by enumeration") {
  const auto f2 = FiniteField::create(2, 1);
  const auto w2 = symplectic_quadrangle(f2);
  CHECK(w2.points.size() == 15);
  CHECK(w2.lines.size() == 15);

  const auto f3 = FiniteField::create(3, 1);
  const auto w3 = symplectic_quadrangle(f3);
  CHECK(w3.points.size() == 40);
  CHECK(w3.lines.size() == 40);

  for (const auto& line : w3.lines) CHECK(line.size() == 4);
  // Point degrees: every point on q+1 lines.
  std::vector<int> deg(w3.points.size(), 0);
  for (const auto& line : w3.lines)
    for (int p : line) deg[p]++;
  for (int d : deg) CHECK(d == 4);
}

TEST_CASE("isotropy of coordinate planes under the fixed form") {
  const auto f2 = FiniteField::create(2, 1);
  const std::vector<int> e1{1, 0, 0, 0}, e2{0, 1, 0, 0}, e3{0, 0, 1, 0};
  CHECK(symplectic_form(f2, e1, e2) == 0);  // span{e1,e2} isotropic
  CHECK(symplectic_form(f2, e1, e3) == 1);  // span{e1,e3} is not

  const auto w2 = symplectic_quadrangle(f2);
  const auto p1 = std::find(w2.points.begin(), w2.points.end(), e1) - w2.points.begin();
  const auto p2 = std::find(w2.points.begin(), w2.points.end(), e2) - w2.points.begin();
  const auto p3 = std::find(w2.points.begin(), w2.points.end(), e3) - w2.points.begin();
  bool has12 = false, has13 = false;
  for (const auto& line : w2.lines) {
    const bool h1 = std::binary_search(line.begin(), line.end(), (int)p1);
    if (h1 && std::binary_search(line.begin(), line.end(), (int)p2)) has12 = true;
    if (h1 && std::binary_search(line.begin(), line.end(), (int)p3)) has13 = true;
  }
  CHECK(has12);
  CHECK(!has13);
}

TEST_CASE("incidence graphs: flags, degrees, duality of counts") {
  for (int q : {2, 3}) {
    const auto f = FiniteField::create(q, 1);
    const auto pg = projective_plane(f);
    const auto g = incidence_graph(pg);
    CHECK(g.vertices.size() == 2 * pg.points.size());
    CHECK(g.edges.size() == pg.points.size() * (q + 1));
    int points = 0, lines = 0;
    for (const auto& v : g.vertices) {
      if (v.side == VertexSide::Point) ++points;
      if (v.side == VertexSide::Line) ++lines;
    }
    CHECK(points == lines);
    for (size_t v = 0; v < g.vertices.size(); ++v) CHECK(g.degree((int)v) == q + 1);
    for (const auto& [u, w] : g.edges) {
      CHECK(g.vertices[u].side == VertexSide::Point);
      CHECK(g.vertices[w].side == VertexSide::Line);
    }
  }
  const auto w2 = symplectic_quadrangle(FiniteField::create(2, 1));
  const auto g = incidence_graph(w2);
  CHECK(g.vertices.size() == 30);
  CHECK(g.edges.size() == 45);
}

TEST_CASE("complete bipartite graphs") {
  const auto k22 = complete_bipartite(1);
  CHECK(k22.vertices.size() == 4);
  CHECK(k22.edges.size() == 4);

  const auto k33 = complete_bipartite(2);
  CHECK(k33.edges.size() == 9);

  const auto k55 = complete_bipartite(4);
  CHECK(k55.vertices.size() == 10);
  CHECK(k55.edges.size() == 25);
  for (size_t v = 0; v < k55.vertices.size(); ++v) CHECK(k55.degree((int)v) == 5);
}

TEST_CASE("generalized polygon validation") {
  const auto fano_graph = incidence_graph(projective_plane(FiniteField::create(2, 1)));
  const auto r3 = validate_generalized_polygon(fano_graph, 3);
  CHECK(r3.girth == 6);
  CHECK(r3.diameter == 3);
  CHECK(r3.pass);

  const auto w2_graph = incidence_graph(symplectic_quadrangle(FiniteField::create(2, 1)));
  const auto r4 = validate_generalized_polygon(w2_graph, 4);
  CHECK(r4.girth == 8);
  CHECK(r4.diameter == 4);
  CHECK(r4.pass);

  const auto k33 = complete_bipartite(2);
  const auto r2 = validate_generalized_polygon(k33, 2);
  CHECK(r2.girth == 4);
  CHECK(r2.diameter == 2);
  CHECK(r2.pass);

  // Wrong gonality fails.
  CHECK(!validate_generalized_polygon(k33, 3).pass);
}

TEST_CASE("no common neighbors across an edge in a plane incidence graph") {
  const auto g = incidence_graph(projective_plane(FiniteField::create(2, 1)));
  const auto adj = g.adjacency_lists();
  for (const auto& [u, w] : g.edges) {
    int common = 0;
    for (int a : adj[u])
      for (int b : adj[w])
        if (a == b) ++common;
    CHECK(common == 0);
  }
}

TEST_CASE("graph JSON round trip") {
  const auto g = incidence_graph(projective_plane(FiniteField::create(3, 1)));
  const auto text = link_graph_to_json(g);
  const auto back = link_graph_from_json(text);
  CHECK(back.kind == g.kind);
  CHECK(back.q == g.q);
  CHECK(back.edges == g.edges);
  CHECK(link_graph_to_json(back) == text);

  CHECK_THROWS_AS(link_graph_from_json("{"), Error);
  CHECK_THROWS_AS(link_graph_from_json("{\"kind\":\"sl3\",\"q\":2,\"vertices\":[],\"edges\":[[0,1]]}"), Error);
}
