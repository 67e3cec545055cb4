// linklab: batch verification front end.
//
// Subcommands generate link geometries, compute spectral gaps, run harmonic
// descent on voltage complexes, and execute the parabolic and apartment
// verification suites. Exit codes: 0 all checks passed, 1 a check failed,
// 2 usage or I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "linklab/apartment.hpp"
#include "linklab/cat0_json.hpp"
#include "linklab/geometry.hpp"
#include "linklab/harmonic.hpp"
#include "linklab/indefinite.hpp"
#include "linklab/spectra.hpp"

namespace {

using namespace linklab;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::malformed_input, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(errc::malformed_input, "cannot write " + path);
  out << text;
}

void flatten_json(const nlohmann::ordered_json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_json(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      flatten_json(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << "," << j.dump() << "\n";
  }
}

std::string render_report(const std::string& json_text, const std::string& format) {
  if (format == "json") return json_text;
  const auto j = nlohmann::ordered_json::parse(json_text);
  std::ostringstream os;
  os << "key,value\n";
  flatten_json(j, "", os);
  return os.str();
}

void emit(const std::string& json_text, const std::string& format, const std::string& path) {
  const auto text = render_report(json_text, format);
  if (path.empty())
    std::cout << text;
  else
    write_file(path, text);
}

// q = p^k for prime p, or nothing.
std::optional<std::pair<int, int>> factor_prime_power(int q) {
  if (q < 2) return std::nullopt;
  for (int p = 2; p <= q; ++p) {
    if (q % p) continue;
    int k = 0, rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++k;
    }
    if (rest == 1) return std::make_pair(p, k);
    return std::nullopt;
  }
  return std::nullopt;
}

LinkGraph build_graph(const std::string& kind, int q) {
  if (kind == "bipartite") return complete_bipartite(q);
  const auto pk = factor_prime_power(q);
  if (!pk) fail(errc::malformed_input, "q = " + std::to_string(q) + " is not a prime power");
  const auto field = FiniteField::create(pk->first, pk->second);
  if (kind == "pg") return incidence_graph(projective_plane(field));
  if (kind == "gq") return incidence_graph(symplectic_quadrangle(field));
  fail(errc::malformed_input, "unknown geometry kind '" + kind + "'");
}

int cmd_geometry(const std::string& kind, int q, const std::string& out) {
  const auto g = build_graph(kind, q);
  const auto text = link_graph_to_json(g);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int cmd_spectrum(const std::string& graph_path, double tol, const std::string& report,
                 const std::string& format) {
  const auto g = link_graph_from_json(read_file(graph_path));
  SpectralReport r;
  try {
    r = spectral_gap(g);
  } catch (const Error& e) {
    if (e.code() == errc::disconnected) {
      std::cerr << e.what() << "\n";
      return 1;
    }
    throw;
  }
  emit(spectral_report_to_json(r), format, report);
  if (r.kernel_dim != 1) return 1;
  if (r.residual && *r.residual > tol) return 1;
  return 0;
}

int cmd_gap(const std::string& kind_name, int q, const std::string& report, const std::string& format) {
  const LinkKind kind = link_kind_from_name(kind_name);
  const auto g = kind == LinkKind::Sl3 ? build_graph("pg", q)
                 : kind == LinkKind::Sp4Special ? build_graph("gq", q)
                                                : complete_bipartite(q);
  const auto sr = spectral_gap(g);

  nlohmann::ordered_json j = nlohmann::ordered_json::parse(spectral_report_to_json(sr));
  bool ok = sr.residual && *sr.residual <= 1e-8;
  if (kind != LinkKind::Sp4NonSpecial) {
    const auto m = rigidity_margin(kind, q);
    j["margin"] = m.margin;
    j["margin_positive"] = m.positive;
    if (m.threshold) j["warning"] = "rigidity margin vanishes at this q";
    // A non-positive margin is legitimate only at the quadrangle threshold.
    if (!m.positive && !m.threshold) ok = false;
  }
  emit(j.dump(2) + "\n", format, report);
  std::cout << "lambda1 = " << sr.lambda1 << "  expected = " << (sr.expected ? *sr.expected : 0.0)
            << "  residual = " << (sr.residual ? *sr.residual : 0.0) << "\n";
  return ok ? 0 : 1;
}

int cmd_harmonic(const std::string& complex_path, const std::string& init_path, uint64_t seed, bool has_seed,
                 int max_iter, double tol, double radius, const std::string& report, const std::string& map_out,
                 const std::string& format) {
  const auto c = load_complex(read_file(complex_path));
  EquivariantMap f0;
  std::optional<uint64_t> used_seed;
  if (!init_path.empty()) {
    f0 = map_from_json(c.space, read_file(init_path));
    if ((int)f0.values.size() != c.n_vertices()) fail(errc::malformed_input, "init map has wrong vertex count");
  } else {
    if (!has_seed) fail(errc::malformed_input, "random initialization requires --seed");
    used_seed = seed;
    f0 = random_map(c, seed, 1.0);
  }
  DescentOptions opts;
  opts.max_iter = max_iter;
  opts.energy_tol = tol;
  opts.radius = radius;
  const auto r = harmonic_descent(c, f0, opts);
  emit(descent_result_to_json(r, used_seed), format, report);
  if (!map_out.empty()) write_file(map_out, map_to_json(c.space, r.map));
  return r.status == DescentStatus::Converged ? 0 : 1;
}

int cmd_chain(const std::string& complex_path, const std::string& map_path, const std::string& lambda_path,
              const std::string& report, const std::string& format) {
  const auto c = load_complex(read_file(complex_path));
  const auto f = map_from_json(c.space, read_file(map_path));
  std::map<VertexClass, double> lambdas;
  const auto lj = nlohmann::json::parse(read_file(lambda_path));
  for (const auto& [k, v] : lj.items()) lambdas[vertex_class_from_name(k)] = v.get<double>();
  const auto r = wang_chain_report(c, f, lambdas);
  emit(chain_report_to_json(r), format, report);

  bool ok = r.eq1_min_slack >= -1e-9 && r.eq2_identity_residual <= 1e-9 * (1.0 + r.energy);
  if (r.harmonic) {
    if (r.eq3_slack) ok = ok && *r.eq3_slack >= -1e-8;
    if (r.classed)
      ok = ok && *r.eq3_special_slack >= -1e-8 && *r.eq3_nonspecial_slack >= -1e-8 &&
           *r.split_slack >= -1e-8;
  }
  if (r.classed)
    ok = ok && r.eq2_special_residual <= 1e-9 * (1.0 + r.energy) &&
         r.eq2_nonspecial_residual <= 1e-9 * (1.0 + r.energy);
  return ok ? 0 : 1;
}

int cmd_parabolic(const std::string& field, int q, int p, int n3, int trials, uint64_t seed,
                  const std::string& report, const std::string& format) {
  const auto r = parabolic_trials(scalar_field_from_name(field), q, p, n3, trials, seed);
  emit(trial_report_to_json(r), format, report);
  const bool ok = r.form_residual <= 1e-10 && r.decompose_residual <= 1e-10 &&
                  r.projection_residual <= 1e-9 && r.closure_residual <= 1e-9 &&
                  r.double_commutator <= 1e-12 && r.levi_norm_residual <= 1e-10 &&
                  r.commutator_b_residual <= 1e-10 && r.homomorphism_b_residual <= 1e-10;
  return ok ? 0 : 1;
}

int cmd_apartment(int p, int samples, uint64_t seed, const std::string& report, const std::string& format) {
  const auto r = apartment_report(p, samples, seed);
  emit(apartment_report_to_json(r), format, report);
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite verification lab for building links, harmonic maps, and parabolic block algebra"};
  app.require_subcommand(1);

  std::string format = "json";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));

  auto* geom = app.add_subcommand("geometry", "generate a link graph as JSON");
  std::string geom_kind, geom_out;
  int geom_q = 2;
  geom->add_option("--kind", geom_kind, "pg | gq | bipartite")->required()->check(CLI::IsMember({"pg", "gq", "bipartite"}));
  geom->add_option("--q", geom_q, "field order / side parameter")->required();
  geom->add_option("--out", geom_out, "output path (stdout if omitted)");

  auto* spec = app.add_subcommand("spectrum", "eigenvalues and gap of a stored graph");
  std::string spec_graph, spec_report;
  double spec_tol = 1e-8;
  spec->add_option("--graph", spec_graph, "graph JSON path")->required();
  spec->add_option("--tol", spec_tol, "residual tolerance for exit status");
  spec->add_option("--report", spec_report, "report path (stdout if omitted)");

  auto* gap = app.add_subcommand("gap", "closed-form gap check with rigidity margin");
  std::string gap_kind, gap_report;
  int gap_q = 2;
  gap->add_option("--kind", gap_kind, "sl3 | sp4-special | sp4-nonspecial")->required()
      ->check(CLI::IsMember({"sl3", "sp4-special", "sp4-nonspecial"}));
  gap->add_option("--q", gap_q, "field order")->required();
  gap->add_option("--report", gap_report, "report path");

  auto* harm = app.add_subcommand("harmonic", "energy descent on a voltage complex");
  std::string harm_complex, harm_init, harm_report, harm_map_out;
  uint64_t harm_seed = 0;
  int harm_max_iter = 5000;
  double harm_tol = 1e-12, harm_radius = 1e3;
  harm->add_option("--complex", harm_complex, "complex JSON path")->required();
  harm->add_option("--init", harm_init, "initial map JSON path");
  auto* seed_opt = harm->add_option("--seed", harm_seed, "seed for random initialization");
  harm->add_option("--max-iter", harm_max_iter, "sweep cap");
  harm->add_option("--tol", harm_tol, "per-sweep energy decrease threshold");
  harm->add_option("--radius", harm_radius, "divergence detection radius");
  harm->add_option("--report", harm_report, "report path");
  harm->add_option("--map-out", harm_map_out, "write the final map as JSON");

  auto* chain = app.add_subcommand("chain", "local-to-global inequality report");
  std::string chain_complex, chain_map, chain_lambda, chain_report;
  chain->add_option("--complex", chain_complex, "complex JSON path")->required();
  chain->add_option("--map", chain_map, "map JSON path")->required();
  chain->add_option("--lambda-table", chain_lambda, "per-class gap JSON path")->required();
  chain->add_option("--report", chain_report, "report path");

  auto* para = app.add_subcommand("parabolic", "seeded block-matrix identity trials");
  std::string para_field = "r", para_report;
  int para_q = 1, para_p = 1, para_n3 = 8, para_trials = 100;
  uint64_t para_seed = 1;
  para->add_option("--field", para_field, "r | c | h")->required()->check(CLI::IsMember({"r", "c", "h"}));
  para->add_option("--q", para_q, "isotropic block size")->required();
  para->add_option("--p", para_p, "form index")->required();
  para->add_option("--n3", para_n3, "truncation of the infinite block");
  para->add_option("--trials", para_trials, "number of random instances");
  para->add_option("--seed", para_seed, "RNG seed")->required();
  para->add_option("--report", para_report, "report path");

  auto* apt = app.add_subcommand("apartment", "spherical simplex diameter and cover checks");
  int apt_p = 3, apt_samples = 100;
  uint64_t apt_seed = 1;
  std::string apt_report;
  apt->add_option("--p", apt_p, "rank")->required();
  apt->add_option("--samples", apt_samples, "sampled pairs per simplex");
  apt->add_option("--seed", apt_seed, "RNG seed");
  apt->add_option("--report", apt_report, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (geom->parsed()) return cmd_geometry(geom_kind, geom_q, geom_out);
    if (spec->parsed()) return cmd_spectrum(spec_graph, spec_tol, spec_report, format);
    if (gap->parsed()) return cmd_gap(gap_kind, gap_q, gap_report, format);
    if (harm->parsed())
      return cmd_harmonic(harm_complex, harm_init, harm_seed, seed_opt->count() > 0, harm_max_iter, harm_tol,
                          harm_radius, harm_report, harm_map_out, format);
    if (chain->parsed()) return cmd_chain(chain_complex, chain_map, chain_lambda, chain_report, format);
    if (para->parsed())
      return cmd_parabolic(para_field, para_q, para_p, para_n3, para_trials, para_seed, para_report, format);
    if (apt->parsed()) return cmd_apartment(apt_p, apt_samples, apt_seed, apt_report, format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
