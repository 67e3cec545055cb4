#include "linklab/apartment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

namespace linklab {

namespace {

double clamped_acos(double v) { return std::acos(std::min(1.0, std::max(-1.0, v))); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<SphericalSimplex> enumerate_simplices(int p) {
  if (p < 2 || p > 7) fail(errc::rank_too_large, "rank p must lie in 2..7");
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<SphericalSimplex> out;
  for (int mask = 0; mask < (1 << p); ++mask) {
    std::vector<int> signs(p);
    for (int i = 0; i < p; ++i) signs[i] = (mask >> i) & 1 ? -1 : 1;
    std::vector<int> sigma = perm;
    do {
      SphericalSimplex s;
      s.p = p;
      s.signs = signs;
      s.perm = sigma;
      s.vertices.resize(p, std::vector<double>(p, 0.0));
      for (int k = 0; k < p; ++k) {
        const double c = 1.0 / std::sqrt((double)k + 1.0);
        for (int i = 0; i <= k; ++i) s.vertices[k][sigma[i]] = signs[sigma[i]] * c;
      }
      out.push_back(std::move(s));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  return out;
}

DiameterReport simplex_diameter(const SphericalSimplex& s, int samples, uint64_t seed) {
  DiameterReport r;
  const int p = s.p;
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) {
      const double ip = dot(s.vertices[a], s.vertices[b]);
      r.min_inner = std::min(r.min_inner, ip);
      r.vertex_diam = std::max(r.vertex_diam, clamped_acos(ip));
    }

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expd(1.0);
  auto sample_point = [&]() {
    // Dirichlet(1,...,1) convex weights on the vertices, then normalize.
    std::vector<double> w(p);
    double wsum = 0.0;
    for (int i = 0; i < p; ++i) {
      w[i] = expd(rng);
      wsum += w[i];
    }
    std::vector<double> x(p, 0.0);
    for (int i = 0; i < p; ++i)
      for (int c = 0; c < p; ++c) x[c] += (w[i] / wsum) * s.vertices[i][c];
    const double n = std::sqrt(dot(x, x));
    for (double& c : x) c /= n;
    return x;
  };
  for (int t = 0; t < samples; ++t) {
    const auto x = sample_point();
    const auto y = sample_point();
    const double ip = dot(x, y);
    r.min_inner = std::min(r.min_inner, ip);
    r.sampled_diam = std::max(r.sampled_diam, clamped_acos(ip));
  }
  const double bound = clamped_acos(1.0 / p) + 1e-9;
  r.within_bound = r.vertex_diam <= bound && r.sampled_diam <= bound;
  return r;
}

int count_containing_cells(int p, const std::vector<double>& x, double tol) {
  int count = 0;
  for (const auto& cell : enumerate_simplices(p)) {
    bool ok = true;
    for (int i = 0; i < p && ok; ++i) ok = cell.signs[i] * x[i] >= -tol;
    for (int k = 0; k + 1 < p && ok; ++k)
      ok = cell.signs[cell.perm[k]] * x[cell.perm[k]] >= cell.signs[cell.perm[k + 1]] * x[cell.perm[k + 1]] - tol;
    if (ok) ++count;
  }
  return count;
}

CoverStats cover_check(int p, int samples, uint64_t seed) {
  if (p < 2 || p > 7) fail(errc::rank_too_large, "rank p must lie in 2..7");
  CoverStats stats;
  stats.samples = samples;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  bool all_covered = true;
  for (int t = 0; t < samples; ++t) {
    std::vector<double> x(p);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (int i = 0; i < p; ++i) {
        x[i] = gauss(rng);
        n2 += x[i] * x[i];
      }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    for (double& c : x) c /= n;

    // Canonical cell: signs from the coordinates, permutation from sorting by
    // decreasing magnitude.
    std::vector<int> signs(p), order(p);
    for (int i = 0; i < p; ++i) signs[i] = x[i] >= 0.0 ? 1 : -1;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(x[a]) > std::abs(x[b]); });

    bool tie = false;
    for (int i = 0; i < p; ++i)
      if (std::abs(x[i]) < 1e-12) tie = true;
    for (int k = 0; k + 1 < p; ++k)
      if (std::abs(std::abs(x[order[k]]) - std::abs(x[order[k + 1]])) < 1e-12) tie = true;
    if (tie) ++stats.boundary_ties;

    // Membership in the canonical cell.
    bool member = true;
    for (int i = 0; i < p && member; ++i) member = signs[i] * x[i] >= 0.0;
    for (int k = 0; k + 1 < p && member; ++k)
      member = std::abs(x[order[k]]) >= std::abs(x[order[k + 1]]);
    if (!member) all_covered = false;
  }
  stats.covered = all_covered;
  return stats;
}

ApartmentReport apartment_report(int p, int samples_per_simplex, uint64_t seed) {
  ApartmentReport r;
  r.p = p;
  const auto cells = enumerate_simplices(p);
  r.n_simplices = (long long)cells.size();
  std::mt19937_64 seeder(seed);
  for (const auto& cell : cells) {
    const auto d = simplex_diameter(cell, samples_per_simplex, seeder());
    r.max_diameter = std::max(r.max_diameter, std::max(d.vertex_diam, d.sampled_diam));
    r.min_inner = std::min(r.min_inner, d.min_inner);
  }
  const double half_pi = std::acos(0.0);
  r.bound_margin = half_pi - r.max_diameter;
  const bool covered = cover_check(p, 1000, seeder()).covered;
  r.pass = covered && r.min_inner >= 1.0 / p - 1e-12 &&
           r.max_diameter <= clamped_acos(1.0 / p) + 1e-9 && r.bound_margin > 0.0;
  return r;
}

std::string apartment_report_to_json(const ApartmentReport& r) {
  nlohmann::ordered_json j;
  j["p"] = r.p;
  j["n_simplices"] = r.n_simplices;
  j["max_diameter"] = r.max_diameter;
  j["min_inner"] = r.min_inner;
  j["bound_pi_over_2_margin"] = r.bound_margin;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

}  // namespace linklab
