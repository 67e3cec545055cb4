#include "linklab/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "linklab/cat0_json.hpp"

namespace linklab {

namespace {

int walk_start(const VoltageEdge& e, bool reversed) { return reversed ? e.to : e.from; }
int walk_end(const VoltageEdge& e, bool reversed) { return reversed ? e.from : e.to; }

// Voltage along the walk direction: forward traversal uses g as stored,
// reverse traversal uses g^{-1}.
Isometry walk_voltage(const ModelSpace& s, const VoltageEdge& e, bool reversed) {
  return reversed ? inverse_isometry(s, e.voltage) : e.voltage;
}

}  // namespace

void validate_complex(const VoltageComplex& c, double holonomy_tol) {
  const int n = c.n_vertices();
  for (const auto& e : c.edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      fail(errc::malformed_input, "edge endpoint out of range");
    validate_isometry(c.space, e.voltage);
  }
  bool classed = false;
  for (auto cl : c.classes)
    if (cl != VertexClass::Generic) classed = true;
  if (classed) {
    for (const auto& e : c.edges)
      if (c.classes[e.from] == VertexClass::NonSpecial && c.classes[e.to] == VertexClass::NonSpecial)
        fail(errc::class_violation, "edge joins two non-special vertices");
  }
  const Isometry id = identity_isometry(c.space);
  for (size_t t = 0; t < c.triangles.size(); ++t) {
    const auto& tri = c.triangles[t];
    for (int i = 0; i < 3; ++i)
      if (tri.edge[i] < 0 || tri.edge[i] >= (int)c.edges.size())
        fail(errc::malformed_input, "triangle references missing edge");
    for (int i = 0; i < 3; ++i) {
      const auto& a = c.edges[tri.edge[i]];
      const auto& b = c.edges[tri.edge[(i + 1) % 3]];
      if (walk_end(a, tri.reversed[i]) != walk_start(b, tri.reversed[(i + 1) % 3]))
        fail(errc::malformed_input, "triangle edges do not chain into a closed walk");
    }
    Isometry h = walk_voltage(c.space, c.edges[tri.edge[0]], tri.reversed[0]);
    h = compose(c.space, h, walk_voltage(c.space, c.edges[tri.edge[1]], tri.reversed[1]));
    h = compose(c.space, h, walk_voltage(c.space, c.edges[tri.edge[2]], tri.reversed[2]));
    if (isometry_deviation(c.space, h, id) > holonomy_tol)
      fail(errc::bad_holonomy, "triangle " + std::to_string(t) + " has nontrivial holonomy");
  }
}

std::string vertex_class_name(VertexClass c) {
  switch (c) {
    case VertexClass::Generic: return "generic";
    case VertexClass::Special: return "special";
    case VertexClass::NonSpecial: return "nonspecial";
  }
  return "generic";
}

VertexClass vertex_class_from_name(const std::string& s) {
  if (s == "generic") return VertexClass::Generic;
  if (s == "special") return VertexClass::Special;
  if (s == "nonspecial") return VertexClass::NonSpecial;
  fail(errc::malformed_input, "unknown vertex class '" + s + "'");
}

VoltageComplex load_complex(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::malformed_input, std::string("complex JSON: ") + e.what());
  }
  VoltageComplex c;
  try {
    c.space = space_from_json(j.at("space"));
    for (const auto& v : j.at("vertices"))
      c.classes.push_back(vertex_class_from_name(v.value("class", std::string("generic"))));
    for (const auto& e : j.at("edges")) {
      VoltageEdge ve;
      ve.from = e.at("from").get<int>();
      ve.to = e.at("to").get<int>();
      ve.voltage = isometry_from_json(c.space, e.at("voltage"));
      c.edges.push_back(std::move(ve));
    }
    if (j.contains("triangles")) {
      for (const auto& t : j.at("triangles")) {
        Triangle tri{};
        if (t.is_object()) {
          for (int i = 0; i < 3; ++i) {
            tri.edge[i] = t.at("edges").at(i).get<int>();
            tri.reversed[i] = t.at("reversed").at(i).get<bool>();
          }
        } else {
          for (int i = 0; i < 3; ++i) tri.edge[i] = t.at(i).get<int>();
          // Infer traversal directions: first flag combination that chains.
          bool found = false;
          for (int mask = 0; mask < 8 && !found; ++mask) {
            Triangle cand = tri;
            for (int i = 0; i < 3; ++i) cand.reversed[i] = (mask >> i) & 1;
            bool ok = true;
            for (int i = 0; i < 3 && ok; ++i) {
              if (cand.edge[i] < 0 || cand.edge[i] >= (int)c.edges.size())
                fail(errc::malformed_input, "triangle references missing edge");
              const auto& a = c.edges[cand.edge[i]];
              const auto& b = c.edges[cand.edge[(i + 1) % 3]];
              ok = walk_end(a, cand.reversed[i]) == walk_start(b, cand.reversed[(i + 1) % 3]);
            }
            if (ok) {
              tri = cand;
              found = true;
            }
          }
          if (!found) fail(errc::malformed_input, "triangle edges cannot be chained");
        }
        c.triangles.push_back(tri);
      }
    }
    if (j.contains("q") && !j.at("q").is_null()) c.q = j.at("q").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("complex JSON: ") + e.what());
  }
  validate_complex(c);
  return c;
}

std::string complex_to_json(const VoltageComplex& c) {
  nlohmann::ordered_json j;
  j["space"] = space_to_json(c.space);
  j["vertices"] = nlohmann::ordered_json::array();
  for (auto cl : c.classes) j["vertices"].push_back({{"class", vertex_class_name(cl)}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : c.edges)
    j["edges"].push_back(
        {{"from", e.from}, {"to", e.to}, {"voltage", isometry_to_json(c.space, e.voltage)}});
  j["triangles"] = nlohmann::ordered_json::array();
  for (const auto& t : c.triangles)
    j["triangles"].push_back({{"edges", t.edge}, {"reversed", t.reversed}});
  if (c.q) j["q"] = *c.q;
  return j.dump(2) + "\n";
}

EquivariantMap map_from_json(const ModelSpace& space, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::malformed_input, std::string("map JSON: ") + e.what());
  }
  EquivariantMap f;
  try {
    for (const auto& p : j.at("values")) f.values.push_back(point_from_json(space, p));
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("map JSON: ") + e.what());
  }
  return f;
}

std::string map_to_json(const ModelSpace& space, const EquivariantMap& f) {
  nlohmann::ordered_json j;
  j["values"] = nlohmann::ordered_json::array();
  for (const auto& p : f.values) j["values"].push_back(point_to_json(space, p));
  return j.dump(2) + "\n";
}

EquivariantMap constant_map(const VoltageComplex& c) {
  EquivariantMap f;
  f.values.assign(c.n_vertices(), base_point(c.space));
  return f;
}

EquivariantMap random_map(const VoltageComplex& c, uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  EquivariantMap f;
  const Point b = base_point(c.space);
  for (int v = 0; v < c.n_vertices(); ++v) f.values.push_back(random_point_near(c.space, b, rng, scale));
  return f;
}

double energy(const VoltageComplex& c, const EquivariantMap& f) {
  double e = 0.0;
  for (const auto& ve : c.edges) {
    const double d = distance(c.space, f.values[ve.from], apply_isometry(c.space, ve.voltage, f.values[ve.to]));
    e += d * d;
  }
  return e;
}

std::vector<Point> neighbor_targets(const VoltageComplex& c, const EquivariantMap& f, int v) {
  std::vector<Point> targets;
  for (const auto& e : c.edges) {
    if (e.from == v) targets.push_back(apply_isometry(c.space, e.voltage, f.values[e.to]));
    if (e.to == v)
      targets.push_back(apply_isometry(c.space, inverse_isometry(c.space, e.voltage), f.values[e.from]));
  }
  return targets;
}

std::vector<Tangent> differential(const VoltageComplex& c, const EquivariantMap& f, int v) {
  std::vector<Tangent> out;
  for (const auto& target : neighbor_targets(c, f, v)) out.push_back(log_map(c.space, f.values[v], target));
  return out;
}

double gradient_residual(const VoltageComplex& c, const EquivariantMap& f) {
  double worst = 0.0;
  for (int v = 0; v < c.n_vertices(); ++v) {
    Tangent sum;
    sum.v.assign(c.space.point_size(), 0.0);
    for (const auto& t : differential(c, f, v)) sum += t;
    worst = std::max(worst, tangent_norm(c.space, f.values[v], sum));
  }
  return worst;
}

namespace {

// Energy of the edge terms touching v, as a function of the value x placed
// there. Loop terms move both endpoints at once.
double local_energy(const VoltageComplex& c, const EquivariantMap& f, int v, const Point& x) {
  double e = 0.0;
  for (const auto& ve : c.edges) {
    if (ve.from == v && ve.to == v) {
      const double d = distance(c.space, x, apply_isometry(c.space, ve.voltage, x));
      e += d * d;
    } else if (ve.from == v) {
      const double d = distance(c.space, x, apply_isometry(c.space, ve.voltage, f.values[ve.to]));
      e += d * d;
    } else if (ve.to == v) {
      const double d = distance(c.space, f.values[ve.from], apply_isometry(c.space, ve.voltage, x));
      e += d * d;
    }
  }
  return e;
}

}  // namespace

DescentResult harmonic_descent(const VoltageComplex& c, const EquivariantMap& f0, const DescentOptions& opts) {
  if ((int)f0.values.size() != c.n_vertices()) fail(errc::dimension_error, "map size does not match complex");
  DescentResult r;
  r.map = f0;
  r.trace.push_back(energy(c, r.map));

  for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
    if (opts.jacobi) {
      EquivariantMap next = r.map;
      for (int v = 0; v < c.n_vertices(); ++v) {
        const auto targets = neighbor_targets(c, r.map, v);
        if (targets.empty()) continue;
        next.values[v] = frechet_mean(c.space, targets, std::vector<double>(targets.size(), 1.0));
      }
      r.map = std::move(next);
    } else {
      for (int v = 0; v < c.n_vertices(); ++v) {
        const auto targets = neighbor_targets(c, r.map, v);
        if (targets.empty()) continue;
        const Point candidate = frechet_mean(c.space, targets, std::vector<double>(targets.size(), 1.0));
        const double before = local_energy(c, r.map, v, r.map.values[v]);
        // The mean of frozen targets is a first-order descent direction even
        // for loop terms, so a short backtrack always finds improvement away
        // from critical points.
        double t = 1.0;
        while (t > 1e-8) {
          const Point cand = geodesic_point(c.space, r.map.values[v], candidate, t);
          if (local_energy(c, r.map, v, cand) <= before) {
            r.map.values[v] = cand;
            break;
          }
          t *= 0.5;
        }
      }
    }
    r.trace.push_back(energy(c, r.map));
    r.sweeps = sweep + 1;

    double drift = 0.0;
    for (int v = 0; v < c.n_vertices(); ++v)
      drift = std::max(drift, distance(c.space, r.map.values[v], f0.values[v]));
    if (drift > opts.radius) {
      r.status = DescentStatus::Diverging;
      break;
    }

    const double decrease = r.trace[r.trace.size() - 2] - r.trace.back();
    if (decrease < opts.energy_tol) {
      r.residual = gradient_residual(c, r.map);
      if (r.residual <= opts.grad_tol) {
        r.status = DescentStatus::Converged;
        break;
      }
    }
  }
  r.final_energy = r.trace.back();
  r.residual = gradient_residual(c, r.map);
  if (r.status == DescentStatus::MaxIter && r.residual <= opts.grad_tol &&
      r.trace.size() >= 2 && r.trace[r.trace.size() - 2] - r.trace.back() < opts.energy_tol)
    r.status = DescentStatus::Converged;
  return r;
}

std::string descent_result_to_json(const DescentResult& r, std::optional<uint64_t> seed) {
  nlohmann::ordered_json j;
  switch (r.status) {
    case DescentStatus::Converged: j["status"] = "converged"; break;
    case DescentStatus::MaxIter: j["status"] = "max-iter"; break;
    case DescentStatus::Diverging: j["status"] = "diverging"; break;
  }
  j["sweeps"] = r.sweeps;
  j["final_energy"] = r.final_energy;
  j["gradient_residual"] = r.residual;
  if (seed) j["seed"] = *seed;
  j["energy_trace"] = r.trace;
  return j.dump(2) + "\n";
}

namespace {

struct Dart {
  int edge;
  bool at_from;  // true when the dart sits at the stored source endpoint
};

std::vector<Dart> darts_at(const VoltageComplex& c, int v) {
  std::vector<Dart> darts;
  for (int e = 0; e < (int)c.edges.size(); ++e) {
    if (c.edges[e].from == v) darts.push_back({e, true});
    if (c.edges[e].to == v) darts.push_back({e, false});
  }
  return darts;
}

int dart_index(const std::vector<Dart>& darts, int edge, bool at_from) {
  for (int i = 0; i < (int)darts.size(); ++i)
    if (darts[i].edge == edge && darts[i].at_from == at_from) return i;
  fail(errc::structure_mismatch, "dart lookup failed");
}

// For each triangle corner at v, the pair of darts it joins plus the chart
// transports of the two neighbouring corners.
struct Corner {
  int dart_out, dart_in;
  int next_vertex, prev_vertex;
  Isometry to_next, to_prev;  // transports into the chart of v
};

std::vector<Corner> corners_at(const VoltageComplex& c, const std::vector<Dart>& darts, int v) {
  std::vector<Corner> out;
  for (const auto& tri : c.triangles) {
    for (int i = 0; i < 3; ++i) {
      const auto& e_out = c.edges[tri.edge[i]];
      if (walk_start(e_out, tri.reversed[i]) != v) continue;
      const int prev = (i + 2) % 3;
      const auto& e_in = c.edges[tri.edge[prev]];
      Corner corner;
      // Dart of the outgoing edge at v: forward traversal leaves the stored
      // source, reverse traversal leaves the stored target.
      corner.dart_out = dart_index(darts, tri.edge[i], !tri.reversed[i]);
      corner.dart_in = dart_index(darts, tri.edge[prev], tri.reversed[prev]);
      corner.next_vertex = walk_end(e_out, tri.reversed[i]);
      corner.prev_vertex = walk_start(e_in, tri.reversed[prev]);
      corner.to_next = walk_voltage(c.space, e_out, tri.reversed[i]);
      corner.to_prev = inverse_isometry(c.space, walk_voltage(c.space, e_in, tri.reversed[prev]));
      out.push_back(std::move(corner));
    }
  }
  return out;
}

}  // namespace

LinkGraph extract_link_graph(const VoltageComplex& c, int v) {
  const auto darts = darts_at(c, v);
  LinkGraph g;
  g.kind = LinkKind::Custom;
  for (const auto& d : darts) {
    g.vertices.push_back({VertexSide::None,
                          "e" + std::to_string(d.edge) + (d.at_from ? "+" : "-")});
  }
  for (const auto& corner : corners_at(c, darts, v)) {
    const int a = std::min(corner.dart_out, corner.dart_in);
    const int b = std::max(corner.dart_out, corner.dart_in);
    g.edges.emplace_back(a, b);
  }
  std::sort(g.edges.begin(), g.edges.end());
  int degree = -1;
  for (int d = 0; d < (int)g.vertices.size(); ++d) {
    const int deg = g.degree(d);
    if (degree < 0) degree = deg;
    if (deg != degree) fail(errc::link_mismatch, "vertex link is not regular");
  }
  g.q = degree >= 1 ? degree - 1 : 0;
  return g;
}

ChainReport wang_chain_report(const VoltageComplex& c, const EquivariantMap& f,
                              const std::map<VertexClass, double>& lambda_by_class) {
  if (!c.q) fail(errc::link_mismatch, "complex does not declare q");
  const int q = *c.q;
  std::vector<int> edge_triangles(c.edges.size(), 0);
  for (const auto& tri : c.triangles)
    for (int i = 0; i < 3; ++i) edge_triangles[tri.edge[i]]++;
  for (size_t e = 0; e < edge_triangles.size(); ++e)
    if (edge_triangles[e] != q + 1)
      fail(errc::link_mismatch, "edge " + std::to_string(e) + " lies in " +
                                    std::to_string(edge_triangles[e]) + " triangles, expected " +
                                    std::to_string(q + 1));
  auto lambda_for = [&](VertexClass cl) {
    auto it = lambda_by_class.find(cl);
    if (it == lambda_by_class.end())
      fail(errc::missing_lambda, "no lambda supplied for class " + vertex_class_name(cl));
    return it->second;
  };

  ChainReport r;
  r.q = q;
  r.energy = energy(c, f);
  r.gradient_residual = gradient_residual(c, f);
  r.harmonic = r.gradient_residual <= 1e-6;

  bool any_classed = false;
  for (auto cl : c.classes)
    if (cl != VertexClass::Generic) any_classed = true;
  r.classed = any_classed;

  double eq1_min = 0.0;
  bool first = true;
  for (int v = 0; v < c.n_vertices(); ++v) {
    const auto darts = darts_at(c, v);
    ChainVertexEntry entry{v, 0.0, 0.0, 0.0};
    for (const auto& corner : corners_at(c, darts, v)) {
      const Point chart_next = apply_isometry(c.space, corner.to_next, f.values[corner.next_vertex]);
      const Point chart_prev = apply_isometry(c.space, corner.to_prev, f.values[corner.prev_vertex]);
      Tangent dnext = log_map(c.space, f.values[v], chart_next);
      const Tangent dprev = log_map(c.space, f.values[v], chart_prev);
      dnext -= dprev;
      const double diff = tangent_norm(c.space, f.values[v], dnext);
      entry.lhs += diff * diff;
      const double dd = distance(c.space, chart_next, chart_prev);
      entry.rhs += dd * dd;
    }
    entry.slack = entry.rhs - entry.lhs;
    if (first || entry.slack < eq1_min) eq1_min = entry.slack;
    first = false;
    r.sum_lhs += entry.lhs;
    r.sum_rhs += entry.rhs;
    if (c.classes[v] == VertexClass::NonSpecial) {
      r.sum_lhs_nonspecial += entry.lhs;
      r.sum_rhs_nonspecial += entry.rhs;
    } else {
      r.sum_lhs_special += entry.lhs;
      r.sum_rhs_special += entry.rhs;
    }
    r.per_vertex.push_back(entry);
  }
  r.eq1_min_slack = eq1_min;
  r.eq2_identity_residual = std::abs(r.sum_rhs - (q + 1) * r.energy);

  if (!r.classed) {
    r.lambda = lambda_for(VertexClass::Generic);
    r.eq3_slack = r.sum_lhs - 2.0 * (*r.lambda) * r.energy;
  } else {
    for (const auto& e : c.edges) {
      const VertexClass ca = c.classes[e.from];
      const VertexClass cb = c.classes[e.to];
      const double d = distance(c.space, f.values[e.from], apply_isometry(c.space, e.voltage, f.values[e.to]));
      if (ca == VertexClass::Special && cb == VertexClass::Special)
        r.e1 += d * d;
      else
        r.e2 += d * d;
    }
    const double lam_s = lambda_for(VertexClass::Special);
    const double lam_ns = lambda_for(VertexClass::NonSpecial);
    r.eq2_special_residual = std::abs(r.sum_rhs_special - (q + 1) * r.e2);
    r.eq2_nonspecial_residual = std::abs(r.sum_rhs_nonspecial - (q + 1) * r.e1);
    r.eq3_special_slack = r.sum_lhs_special - lam_s * (2.0 * r.e1 + r.e2);
    r.eq3_nonspecial_slack = r.sum_lhs_nonspecial - lam_ns * r.e2;
    r.split_slack = r.e1 - r.e2;
  }
  return r;
}

std::string chain_report_to_json(const ChainReport& r) {
  nlohmann::ordered_json j;
  j["q"] = r.q;
  j["energy"] = r.energy;
  j["sum_lhs"] = r.sum_lhs;
  j["sum_rhs"] = r.sum_rhs;
  j["eq1_min_slack"] = r.eq1_min_slack;
  j["eq2_identity_residual"] = r.eq2_identity_residual;
  j["gradient_residual"] = r.gradient_residual;
  j["harmonic"] = r.harmonic;
  if (r.lambda) {
    j["lambda"] = *r.lambda;
    j["eq3_slack"] = *r.eq3_slack;
  }
  if (r.classed) {
    j["e1"] = r.e1;
    j["e2"] = r.e2;
    j["sum_lhs_special"] = r.sum_lhs_special;
    j["sum_rhs_special"] = r.sum_rhs_special;
    j["sum_lhs_nonspecial"] = r.sum_lhs_nonspecial;
    j["sum_rhs_nonspecial"] = r.sum_rhs_nonspecial;
    j["eq2_special_residual"] = r.eq2_special_residual;
    j["eq2_nonspecial_residual"] = r.eq2_nonspecial_residual;
    j["eq3_special_slack"] = *r.eq3_special_slack;
    j["eq3_nonspecial_slack"] = *r.eq3_nonspecial_slack;
    j["split_slack"] = *r.split_slack;
  }
  j["per_vertex"] = nlohmann::ordered_json::array();
  for (const auto& e : r.per_vertex)
    j["per_vertex"].push_back({{"vertex", e.vertex}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"slack", e.slack}});
  return j.dump(2) + "\n";
}

}  // namespace linklab
