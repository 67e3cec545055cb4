#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "complex_builders.hpp"
#include "linklab/harmonic.hpp"
#include "linklab/spectra.hpp"

using namespace linklab;
using namespace linklab::testing;

TEST_CASE("complex loading and validation") {
  const char* trivial = R"({
    "space": {"kind": "euclidean", "n": 2},
    "vertices": [{"class": "generic"}],
    "edges": [],
    "triangles": []
  })";
  const auto c = load_complex(trivial);
  CHECK(c.n_vertices() == 1);
  CHECK(c.edges.empty());

  const char* one_loop = R"({
    "space": {"kind": "euclidean", "n": 2},
    "vertices": [{}],
    "edges": [{"from": 0, "to": 0, "voltage": [{"linear": [1,0,0,1], "translation": [1,0]}]}]
  })";
  const auto cl = load_complex(one_loop);
  CHECK(cl.edges.size() == 1);

  // Triangle with voltages g, h, (hg)^{-1} validates; with (hg) it does not.
  const auto e2 = ModelSpace::euclidean(2);
  const auto g = euclidean_translation(e2, {1.0, 0.0});
  const auto h = euclidean_translation(e2, {0.0, 2.0});
  VoltageComplex tri;
  tri.space = e2;
  tri.classes.assign(3, VertexClass::Generic);
  tri.edges.push_back({0, 1, g});
  tri.edges.push_back({1, 2, h});
  tri.edges.push_back({2, 0, inverse_isometry(e2, compose(e2, g, h))});
  tri.triangles.push_back({{0, 1, 2}, {false, false, false}});
  CHECK_NOTHROW(validate_complex(tri));

  VoltageComplex bad = tri;
  bad.edges[2].voltage = compose(e2, g, h);
  CHECK_THROWS_WITH_AS(validate_complex(bad), doctest::Contains("BadHolonomy"), Error);

  VoltageComplex classed = tri;
  classed.classes = {VertexClass::NonSpecial, VertexClass::NonSpecial, VertexClass::Special};
  CHECK_THROWS_WITH_AS(validate_complex(classed), doctest::Contains("ClassViolation"), Error);

  CHECK_THROWS_WITH_AS(load_complex("{oops"), doctest::Contains("MalformedInput"), Error);
}

TEST_CASE("complex JSON round trip with flag inference") {
  const auto c = torus_a2(3);
  const auto text = complex_to_json(c);
  const auto back = load_complex(text);
  CHECK(back.n_vertices() == c.n_vertices());
  CHECK(back.edges.size() == c.edges.size());
  CHECK(back.triangles.size() == c.triangles.size());
  CHECK(energy(back, constant_map(back)) == doctest::Approx(energy(c, constant_map(c))));
}

TEST_CASE("energy on simple instances") {
  const auto e2 = ModelSpace::euclidean(2);

  // Constant map with stabilizing voltages has zero energy.
  const auto rot = euclidean_rotation_2d(e2, 0.9);
  const auto c_rot = one_vertex_loops(e2, {rot});
  CHECK(energy(c_rot, constant_map(c_rot)) == doctest::Approx(0.0));

  // A translation loop contributes the squared translation length everywhere.
  const auto tr = euclidean_translation(e2, {0.3, 0.4});
  const auto c_tr = one_vertex_loops(e2, {tr});
  EquivariantMap f;
  f.values = {Point{{7.0, -2.0}}};
  CHECK(energy(c_tr, f) == doctest::Approx(0.25).epsilon(1e-12));

  // Identity-voltage edge: energy is the squared distance of the endpoints.
  VoltageComplex c2;
  c2.space = e2;
  c2.classes.assign(2, VertexClass::Generic);
  c2.edges.push_back({0, 1, identity_isometry(e2)});
  EquivariantMap f2;
  f2.values = {Point{{0.0, 0.0}}, Point{{3.0, 4.0}}};
  CHECK(energy(c2, f2) == doctest::Approx(25.0));
}

TEST_CASE("differential entries") {
  const auto e2 = ModelSpace::euclidean(2);
  VoltageComplex c;
  c.space = e2;
  c.classes.assign(2, VertexClass::Generic);
  c.edges.push_back({0, 1, identity_isometry(e2)});
  EquivariantMap f;
  f.values = {Point{{0.0, 0.0}}, Point{{1.0, 0.0}}};
  const auto tangents = differential(c, f, 0);
  REQUIRE(tangents.size() == 1);
  CHECK(tangents[0].v[0] == doctest::Approx(1.0));
  CHECK(tangents[0].v[1] == doctest::Approx(0.0));

  // Norm of each entry equals the chart distance, on a curved target too.
  const auto h2 = ModelSpace::hyperbolic(2);
  const auto cb = one_vertex_loops(h2, {hyperbolic_boost(h2, 0.8)});
  std::mt19937_64 rng(5);
  EquivariantMap fh;
  fh.values = {random_point_near(h2, base_point(h2), rng, 0.7)};
  const auto targets = neighbor_targets(cb, fh, 0);
  const auto tans = differential(cb, fh, 0);
  REQUIRE(targets.size() == 2);  // both loop directions
  for (size_t i = 0; i < targets.size(); ++i)
    CHECK(tangent_norm(h2, fh.values[0], tans[i]) ==
          doctest::Approx(distance(h2, fh.values[0], targets[i])).epsilon(1e-10));

  // Constant map with a stabilizing voltage: all entries vanish.
  const auto crot = one_vertex_loops(e2, {euclidean_rotation_2d(e2, 1.2)});
  const auto zeros = differential(crot, constant_map(crot), 0);
  for (const auto& t : zeros) CHECK(tangent_norm(e2, base_point(e2), t) < 1e-14);
}

TEST_CASE("per-vertex first-order condition at a midpoint") {
  // Middle vertex between neighbours at -e1 and +e1: critical at the origin,
  // residual 2*0.3 when displaced by 0.3.
  const auto e2 = ModelSpace::euclidean(2);
  VoltageComplex c;
  c.space = e2;
  c.classes.assign(3, VertexClass::Generic);
  c.edges.push_back({1, 0, identity_isometry(e2)});
  c.edges.push_back({1, 2, identity_isometry(e2)});
  EquivariantMap f;
  f.values = {Point{{-1.0, 0.0}}, Point{{0.0, 0.0}}, Point{{1.0, 0.0}}};
  auto sum_at = [&](int v) {
    Tangent s;
    s.v.assign(2, 0.0);
    for (const auto& t : differential(c, f, v)) s += t;
    return tangent_norm(e2, f.values[v], s);
  };
  CHECK(sum_at(1) == doctest::Approx(0.0));
  f.values[1] = Point{{0.3, 0.0}};
  CHECK(sum_at(1) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("descent: identity holonomy collapses to a constant map") {
  for (const auto& space : {ModelSpace::euclidean(3), ModelSpace::hyperbolic(2)}) {
    auto c = tetrahedron(space);
    const auto f0 = random_map(c, 99, 0.8);
    DescentOptions opts;
    opts.energy_tol = 1e-15;
    const auto r = harmonic_descent(c, f0, opts);
    CHECK(r.status == DescentStatus::Converged);
    CHECK(r.final_energy < 1e-12);
    CHECK(r.residual <= 1e-6);
    for (size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-12);
  }
}

TEST_CASE("descent: simultaneous-update mode also reaches zero energy") {
  const auto c = tetrahedron(ModelSpace::euclidean(3));
  DescentOptions opts;
  opts.jacobi = true;
  opts.energy_tol = 1e-15;
  const auto r = harmonic_descent(c, random_map(c, 101, 0.8), opts);
  CHECK(r.status == DescentStatus::Converged);
  CHECK(r.final_energy < 1e-12);
}

TEST_CASE("descent: two rotations about the origin find their common fixed point") {
  const auto h2 = ModelSpace::hyperbolic(2);
  const auto c = one_vertex_loops(h2, {hyperbolic_rotation_2d(h2, 0.9), hyperbolic_rotation_2d(h2, 2.0)});
  auto f0 = random_map(c, 7, 0.6);
  const auto r = harmonic_descent(c, f0);
  CHECK(r.status == DescentStatus::Converged);
  // Oracle: refined grid search over the disk.
  const auto gens = std::vector<Isometry>{c.edges[0].voltage, c.edges[1].voltage};
  const auto oracle = grid_search_displacement(h2, gens, 1.5, 13, 8);
  CHECK(distance(h2, r.map.values[0], oracle) < 1e-6);
  CHECK(distance(h2, r.map.values[0], base_point(h2)) < 1e-6);
}

TEST_CASE("descent: axis loop converges onto the axis at its translation length") {
  // A boost attains its translation length on the axis, so the minimizer set
  // is the axis and descent settles there with the squared length as energy.
  const auto h2 = ModelSpace::hyperbolic(2);
  const double ell = 0.7;
  const auto c = one_vertex_loops(h2, {hyperbolic_boost(h2, ell)});

  // Oracle for the translation length: log of the spectral radius of the
  // Minkowski matrix, by power iteration.
  DenseMatrix l(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) l(i, j) = c.edges[0].voltage.g[i * 3 + j];
  std::vector<double> v{1.0, 0.5, 0.25};
  double rho = 1.0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<double> nv(3, 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) nv[i] += l(i, j) * v[j];
    rho = std::sqrt(nv[0] * nv[0] + nv[1] * nv[1] + nv[2] * nv[2]);
    for (int i = 0; i < 3; ++i) v[i] = nv[i] / rho;
  }
  const double ell_from_matrix = std::log(rho);
  CHECK(ell_from_matrix == doctest::Approx(ell).epsilon(1e-6));

  auto f0 = random_map(c, 21, 0.5);
  const auto r = harmonic_descent(c, f0);
  CHECK(r.status == DescentStatus::Converged);
  CHECK(r.final_energy == doctest::Approx(ell * ell).epsilon(1e-6));
  // The limit lies on the axis (x2 = 0 on the hyperboloid).
  CHECK(std::abs(r.map.values[0].x[2]) < 1e-4);
}

TEST_CASE("descent: parabolic loop diverges with vanishing translation length") {
  // No displacement minimizer exists; the energy infimum 0 equals the squared
  // translation length of the parabolic element and descent drifts off.
  const auto h2 = ModelSpace::hyperbolic(2);
  const auto c = one_vertex_loops(h2, {hyperbolic_parabolic_2d(h2, 1.0)});
  EquivariantMap f0;
  f0.values = {base_point(h2)};
  DescentOptions opts;
  opts.radius = 4.0;
  opts.max_iter = 20000;
  const auto r = harmonic_descent(c, f0, opts);
  CHECK(r.status == DescentStatus::Diverging);
  CHECK(r.final_energy < 1e-3);
  for (size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-12);
}

TEST_CASE("descent on the flat torus matches the least-squares oracle") {
  const auto c = torus_a2(3);
  const auto f0 = random_map(c, 3, 1.5);
  DescentOptions opts;
  opts.energy_tol = 1e-16;
  opts.max_iter = 20000;
  const auto r = harmonic_descent(c, f0, opts);
  CHECK(r.status == DescentStatus::Converged);
  CHECK(r.residual <= 1e-6);
  CHECK(r.final_energy == doctest::Approx(flat_minimum_energy(c)).epsilon(1e-9));
}

TEST_CASE("energy is invariant under conjugating every voltage") {
  const auto h2 = ModelSpace::hyperbolic(2);
  const auto c = one_vertex_loops(
      h2, {hyperbolic_rotation_2d(h2, 0.8), compose(h2, hyperbolic_boost(h2, 0.4), hyperbolic_rotation_2d(h2, 0.3))});
  std::mt19937_64 rng(77);
  const auto g = compose(h2, hyperbolic_rotation_2d(h2, 1.1), hyperbolic_boost(h2, 0.6));
  VoltageComplex conj = c;
  for (auto& e : conj.edges)
    e.voltage = compose(h2, g, compose(h2, e.voltage, inverse_isometry(h2, g)));
  for (int t = 0; t < 20; ++t) {
    EquivariantMap f;
    f.values = {random_point_near(h2, base_point(h2), rng, 0.9)};
    EquivariantMap gf;
    gf.values = {apply_isometry(h2, g, f.values[0])};
    CHECK(energy(conj, gf) == doctest::Approx(energy(c, f)).epsilon(1e-9));
  }
}

TEST_CASE("extracted links of the torus complexes") {
  const auto a2 = torus_a2(3);
  const auto link = extract_link_graph(a2, 0);
  CHECK(link.vertices.size() == 6);
  CHECK(link.edges.size() == 6);
  CHECK(link.q == 1);
  const auto val = validate_generalized_polygon(link, 3);  // hexagon = 6-cycle
  CHECK(val.girth == 6);
  CHECK(val.diameter == 3);

  const auto c2 = torus_c2(3);
  const auto center_link = extract_link_graph(c2, c2.n_vertices() - 1);  // a center vertex
  CHECK(center_link.vertices.size() == 4);
  CHECK(validate_generalized_polygon(center_link, 2).girth == 4);
  const auto corner_link = extract_link_graph(c2, 0);
  CHECK(corner_link.vertices.size() == 8);
  const auto v8 = validate_generalized_polygon(corner_link, 4);
  CHECK(v8.girth == 8);
  CHECK(v8.diameter == 4);
}

TEST_CASE("chain report on the tetrahedron with a random map") {
  const auto space = ModelSpace::euclidean(3);
  const auto c = tetrahedron(space);
  const auto f = random_map(c, 13, 1.0);
  const auto r = wang_chain_report(c, f, {{VertexClass::Generic, 3.0}});
  CHECK(r.q == 1);
  CHECK(r.eq1_min_slack >= -1e-9);
  CHECK(r.eq2_identity_residual < 1e-9 * (1.0 + r.energy));
  // In a flat target the comparison is an equality.
  CHECK(r.sum_lhs == doctest::Approx(r.sum_rhs).epsilon(1e-10));
  CHECK(!r.harmonic);

  // Constant maps give all-zero reports.
  const auto rz = wang_chain_report(c, constant_map(c), {{VertexClass::Generic, 3.0}});
  CHECK(rz.energy == 0.0);
  CHECK(rz.sum_lhs == 0.0);
  CHECK(rz.sum_rhs == 0.0);
  CHECK(rz.harmonic);
  CHECK(*rz.eq3_slack == 0.0);
}

TEST_CASE("chain report on a curved target satisfies the comparison strictly") {
  const auto space = ModelSpace::hyperbolic(2);
  const auto c = simplex4_skeleton(space);
  const auto f = random_map(c, 29, 0.8);
  const auto r = wang_chain_report(c, f, {{VertexClass::Generic, 5.0}});
  CHECK(r.q == 2);
  CHECK(r.eq1_min_slack >= -1e-9);
  CHECK(r.eq2_identity_residual < 1e-9 * (1.0 + r.energy));
}

TEST_CASE("full chain on the harmonic flat torus map") {
  const auto c = torus_a2(3);
  DescentOptions opts;
  opts.energy_tol = 1e-16;
  opts.max_iter = 30000;
  const auto r = harmonic_descent(c, random_map(c, 17, 1.0), opts);
  REQUIRE(r.status == DescentStatus::Converged);

  // Lambda from the actual link of each vertex, eigensolved independently.
  const auto link = extract_link_graph(c, 0);
  const double lambda = spectral_gap(link).lambda1;
  CHECK(lambda == doctest::Approx(1.0).epsilon(1e-9));  // hexagon gap = q+1-sqrt(q) at q=1

  const auto chain = wang_chain_report(c, r.map, {{VertexClass::Generic, lambda}});
  CHECK(chain.harmonic);
  CHECK(chain.eq1_min_slack >= -1e-9);
  CHECK(chain.eq2_identity_residual < 1e-9 * (1.0 + chain.energy));
  CHECK(*chain.eq3_slack >= -1e-8);
  // At q = 1 the whole chain collapses to equalities for the affine map.
  CHECK(*chain.eq3_slack < 1e-6);
  CHECK(chain.energy > 1.0);  // genuinely nonconstant harmonic map
}

TEST_CASE("split chain on the harmonic right-isosceles torus map") {
  const auto c = torus_c2(3);
  DescentOptions opts;
  opts.energy_tol = 1e-16;
  opts.max_iter = 30000;
  const auto r = harmonic_descent(c, random_map(c, 19, 1.0), opts);
  REQUIRE(r.status == DescentStatus::Converged);

  const double lam_s = spectral_gap(extract_link_graph(c, 0)).lambda1;
  const double lam_ns = spectral_gap(extract_link_graph(c, c.n_vertices() - 1)).lambda1;
  CHECK(lam_s == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-9));
  CHECK(lam_ns == doctest::Approx(2.0).epsilon(1e-9));

  const auto chain = wang_chain_report(
      c, r.map, {{VertexClass::Special, lam_s}, {VertexClass::NonSpecial, lam_ns}});
  CHECK(chain.classed);
  CHECK(chain.harmonic);
  CHECK(chain.eq1_min_slack >= -1e-9);
  CHECK(chain.eq2_identity_residual < 1e-9 * (1.0 + chain.energy));
  CHECK(chain.eq2_special_residual < 1e-9 * (1.0 + chain.energy));
  CHECK(chain.eq2_nonspecial_residual < 1e-9 * (1.0 + chain.energy));
  CHECK(chain.e1 > 0.0);
  CHECK(chain.e2 > 0.0);
  CHECK(*chain.split_slack >= -1e-8);          // e1 >= e2
  CHECK(*chain.eq3_special_slack >= -1e-8);    // spectral bound, special side
  CHECK(*chain.eq3_nonspecial_slack >= -1e-8); // spectral bound, non-special side
}

TEST_CASE("chain error paths") {
  const auto space = ModelSpace::euclidean(2);
  auto c = tetrahedron(space);
  const auto f = constant_map(c);
  CHECK_THROWS_WITH_AS(wang_chain_report(c, f, {}), doctest::Contains("MissingLambda"), Error);

  auto bad = c;
  bad.q = 2;  // edges lie in 2 triangles, not 3
  CHECK_THROWS_WITH_AS(wang_chain_report(bad, f, {{VertexClass::Generic, 1.0}}),
                       doctest::Contains("LinkMismatch"), Error);

  auto no_q = c;
  no_q.q.reset();
  CHECK_THROWS_AS(wang_chain_report(no_q, f, {{VertexClass::Generic, 1.0}}), Error);
}
