#pragma once

#include <random>
#include <string>
#include <vector>

#include "linklab/dense.hpp"

namespace linklab {

/// One irreducible factor of a model space.
///
/// Euclidean(n): points are coordinate vectors in R^n.
/// Hyperbolic(n): hyperboloid sheet in R^{n+1}, Minkowski form -x0^2 + sum xi^2.
/// Spd(p): symmetric positive-definite p x p matrices with the affine-invariant
/// metric; isometries act by S -> g S g^T.
struct Factor {
  enum class Kind { Euclidean, Hyperbolic, Spd };
  Kind kind;
  int n;  // dimension for Euclidean/Hyperbolic, p for Spd

  int point_size() const;
  int isometry_size() const;
};

/// Finite product of factors with the L^2 product metric. Products are kept
/// flat: product(product(a,b),c) has three factors.
class ModelSpace {
 public:
  static ModelSpace euclidean(int n);
  static ModelSpace hyperbolic(int n);
  static ModelSpace spd(int p);
  static ModelSpace product(const std::vector<ModelSpace>& spaces);

  const std::vector<Factor>& factors() const { return factors_; }
  int point_size() const { return point_size_; }
  int isometry_size() const { return isometry_size_; }
  int point_offset(int factor) const { return point_offsets_[factor]; }
  int isometry_offset(int factor) const { return isometry_offsets_[factor]; }

  bool operator==(const ModelSpace& o) const;

 private:
  std::vector<Factor> factors_;
  std::vector<int> point_offsets_, isometry_offsets_;
  int point_size_ = 0, isometry_size_ = 0;
  void index();
};

/// Point coordinates, factor blocks concatenated.
struct Point {
  std::vector<double> x;
};

/// Tangent vector in ambient per-factor coordinates, anchored at a base point
/// that the caller tracks. Linear combinations of tangents are only meaningful
/// at a common base point.
struct Tangent {
  std::vector<double> v;

  Tangent& operator+=(const Tangent& o);
  Tangent& operator-=(const Tangent& o);
  Tangent scaled(double s) const;
};

/// Isometry, factor blocks concatenated:
/// Euclidean: n^2 orthogonal matrix then n translation; Hyperbolic: the
/// (n+1)^2 Minkowski matrix; Spd: the p^2 congruence factor.
struct Isometry {
  std::vector<double> g;
};

void validate_point(const ModelSpace& s, const Point& p);
void validate_isometry(const ModelSpace& s, const Isometry& g);

double distance(const ModelSpace& s, const Point& x, const Point& y);
Tangent log_map(const ModelSpace& s, const Point& x, const Point& y);
Point exp_map(const ModelSpace& s, const Point& x, const Tangent& v);
Point geodesic_point(const ModelSpace& s, const Point& x, const Point& y, double t);

double inner(const ModelSpace& s, const Point& x, const Tangent& u, const Tangent& v);
double tangent_norm(const ModelSpace& s, const Point& x, const Tangent& u);

struct FrechetOptions {
  int max_iter = 10000;
  double rel_tol = 1e-10;  // stop when ||sum w_i log|| <= rel_tol * sum(w) * max d
};

/// Weighted Fréchet mean by fixed-point iteration with step halving.
Point frechet_mean(const ModelSpace& s, const std::vector<Point>& points, const std::vector<double>& weights,
                   const FrechetOptions& opts = {});

Point apply_isometry(const ModelSpace& s, const Isometry& g, const Point& x);
Isometry compose(const ModelSpace& s, const Isometry& g, const Isometry& h);
Isometry inverse_isometry(const ModelSpace& s, const Isometry& g);
Isometry identity_isometry(const ModelSpace& s);

/// Max-abs difference of the defining blocks; zero iff the same matrix data.
double isometry_deviation(const ModelSpace& s, const Isometry& g, const Isometry& h);

/// Sum of squared displacements d(x, g x)^2 over the generators.
double displacement(const ModelSpace& s, const std::vector<Isometry>& gens, const Point& x);

/// Canonical base point: origin / (1,0,...,0) / identity matrix per factor.
Point base_point(const ModelSpace& s);

/// Gaussian tangent at x with the given scale, pushed through exp.
Point random_point_near(const ModelSpace& s, const Point& x, std::mt19937_64& rng, double scale);

// Isometry builders for single-factor spaces; use product_isometry to stack.
Isometry euclidean_isometry(const ModelSpace& s, const DenseMatrix& q, const std::vector<double>& t);
Isometry euclidean_translation(const ModelSpace& s, const std::vector<double>& t);
Isometry euclidean_rotation_2d(const ModelSpace& s, double theta);
Isometry hyperbolic_matrix(const ModelSpace& s, const DenseMatrix& l);
Isometry hyperbolic_rotation_2d(const ModelSpace& s, double theta);
Isometry hyperbolic_boost(const ModelSpace& s, double length);
Isometry hyperbolic_parabolic_2d(const ModelSpace& s, double shear);
Isometry spd_congruence(const ModelSpace& s, const DenseMatrix& g);
Isometry product_isometry(const ModelSpace& s, const std::vector<Isometry>& parts);
Point product_point(const ModelSpace& s, const std::vector<Point>& parts);

}  // namespace linklab
