#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linklab/errors.hpp"

namespace linklab {

/// Barycentric simplex of the sign-and-order subdivision of S^{p-1}.
/// Vertex k is the normalized partial sum of the first k signed coordinate
/// vectors in permutation order; its nonzero coordinates are +-1/sqrt(k).
struct SphericalSimplex {
  int p = 0;
  std::vector<int> signs;                     // +-1 per coordinate
  std::vector<int> perm;                      // 0-based permutation of {0..p-1}
  std::vector<std::vector<double>> vertices;  // p unit vectors
};

/// All 2^p p! cells of the subdivision, in (sign mask, permutation) order.
std::vector<SphericalSimplex> enumerate_simplices(int p);

struct DiameterReport {
  double vertex_diam = 0.0;   // max pairwise vertex angle
  double sampled_diam = 0.0;  // max angle over sampled point pairs
  double min_inner = 1.0;     // min inner product seen over all pairs
  bool within_bound = false;  // both diameters <= arccos(1/p) + 1e-9
};

/// Angles between vertices and between `samples` random pairs drawn as
/// normalized convex combinations. Every pair must satisfy <x,y> >= 1/p.
DiameterReport simplex_diameter(const SphericalSimplex& s, int samples, uint64_t seed);

struct CoverStats {
  int samples = 0;
  int boundary_ties = 0;  // samples with tied |coordinates| or zeros
  bool covered = false;   // every sample lay in its canonical cell
};

/// Draws random unit vectors and checks each lies in exactly one cell (up to
/// boundary ties): the one read off by coordinate signs and sorted magnitudes.
CoverStats cover_check(int p, int samples, uint64_t seed);

/// Number of cells containing x by direct membership test over all cells
/// (exponential in p; meant for small cross-checks).
int count_containing_cells(int p, const std::vector<double>& x, double tol = 1e-12);

struct ApartmentReport {
  int p = 0;
  long long n_simplices = 0;
  double max_diameter = 0.0;
  double min_inner = 1.0;
  double bound_margin = 0.0;  // pi/2 - max_diameter
  bool pass = false;
};

/// Full sweep: enumerate, measure all simplices, run the cover check.
ApartmentReport apartment_report(int p, int samples_per_simplex, uint64_t seed);

std::string apartment_report_to_json(const ApartmentReport& r);

}  // namespace linklab
