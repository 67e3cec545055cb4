#include "linklab/cat0.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linklab/cat0_json.hpp"

namespace linklab {

int Factor::point_size() const {
  switch (kind) {
    case Kind::Euclidean: return n;
    case Kind::Hyperbolic: return n + 1;
    case Kind::Spd: return n * n;
  }
  return 0;
}

int Factor::isometry_size() const {
  switch (kind) {
    case Kind::Euclidean: return n * n + n;
    case Kind::Hyperbolic: return (n + 1) * (n + 1);
    case Kind::Spd: return n * n;
  }
  return 0;
}

void ModelSpace::index() {
  point_offsets_.clear();
  isometry_offsets_.clear();
  point_size_ = 0;
  isometry_size_ = 0;
  for (const auto& f : factors_) {
    point_offsets_.push_back(point_size_);
    isometry_offsets_.push_back(isometry_size_);
    point_size_ += f.point_size();
    isometry_size_ += f.isometry_size();
  }
}

ModelSpace ModelSpace::euclidean(int n) {
  if (n < 1) fail(errc::dimension_error, "euclidean factor needs n >= 1");
  ModelSpace s;
  s.factors_ = {{Factor::Kind::Euclidean, n}};
  s.index();
  return s;
}

ModelSpace ModelSpace::hyperbolic(int n) {
  if (n < 1) fail(errc::dimension_error, "hyperbolic factor needs n >= 1");
  ModelSpace s;
  s.factors_ = {{Factor::Kind::Hyperbolic, n}};
  s.index();
  return s;
}

ModelSpace ModelSpace::spd(int p) {
  if (p < 1) fail(errc::dimension_error, "spd factor needs p >= 1");
  ModelSpace s;
  s.factors_ = {{Factor::Kind::Spd, p}};
  s.index();
  return s;
}

ModelSpace ModelSpace::product(const std::vector<ModelSpace>& spaces) {
  ModelSpace s;
  for (const auto& part : spaces)
    for (const auto& f : part.factors_) s.factors_.push_back(f);
  if (s.factors_.empty()) fail(errc::dimension_error, "empty product space");
  s.index();
  return s;
}

bool ModelSpace::operator==(const ModelSpace& o) const {
  if (factors_.size() != o.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].kind != o.factors_[i].kind || factors_[i].n != o.factors_[i].n) return false;
  return true;
}

Tangent& Tangent::operator+=(const Tangent& o) {
  for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

Tangent& Tangent::operator-=(const Tangent& o) {
  for (size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}

Tangent Tangent::scaled(double s) const {
  Tangent t = *this;
  for (double& c : t.v) c *= s;
  return t;
}

namespace {

constexpr double kPointTol = 1e-10;
constexpr double kIsometryTol = 1e-10;

double minkowski(const double* a, const double* b, int dim) {
  double s = -a[0] * b[0];
  for (int i = 1; i < dim; ++i) s += a[i] * b[i];
  return s;
}

// Excess eps = -<x,y>_M - 1 evaluated through the difference vector:
// <x-y, x-y>_M = 2 eps exactly on the hyperboloid, and the subtraction form
// stays accurate for nearby points where the direct product cancels.
double hyperbolic_excess(const double* x, const double* y, int dim) {
  double s = -(x[0] - y[0]) * (x[0] - y[0]);
  for (int i = 1; i < dim; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return 0.5 * s;
}

// arccosh(1 + eps) without cancellation; the series branch keeps full
// precision for tiny eps, arsinh covers the rest.
double acosh_from_excess(double eps) {
  if (eps <= 0.0) return 0.0;
  if (eps <= 1e-8) return std::sqrt(2.0 * eps) * (1.0 - eps / 12.0 + 3.0 * eps * eps / 160.0);
  return 2.0 * std::asinh(std::sqrt(0.5 * eps));
}

DenseMatrix as_matrix(const double* a, int rows, int cols) {
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = a[(size_t)i * cols + j];
  return m;
}

void write_matrix(const DenseMatrix& m, double* out) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[(size_t)i * m.cols() + j] = m(i, j);
}

DenseMatrix sym_part(const DenseMatrix& m) {
  DenseMatrix s(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

// f applied to the eigenvalues of a symmetric matrix.
template <typename F>
DenseMatrix sym_apply(const DenseMatrix& m, F&& f) {
  const auto ed = eigh(m);
  const int n = m.rows();
  DenseMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double fk = f(ed.values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) += fk * ed.vectors(i, k) * ed.vectors(j, k);
  }
  return out;
}

DenseMatrix spd_power(const DenseMatrix& m, double e) {
  return sym_apply(m, [e](double v) {
    if (v <= 0.0) fail(errc::numerical_degeneracy, "SPD eigenvalue underflow");
    return std::pow(v, e);
  });
}

struct FactorView {
  const Factor& f;
  int point_off;
  int iso_off;
};

template <typename Fn>
void for_factors(const ModelSpace& s, Fn&& fn) {
  for (size_t i = 0; i < s.factors().size(); ++i)
    fn(FactorView{s.factors()[i], s.point_offset((int)i), s.isometry_offset((int)i)});
}

void check_point_size(const ModelSpace& s, const Point& p) {
  if ((int)p.x.size() != s.point_size()) fail(errc::invalid_point, "point has wrong coordinate count");
}

void check_iso_size(const ModelSpace& s, const Isometry& g) {
  if ((int)g.g.size() != s.isometry_size()) fail(errc::invalid_isometry, "isometry has wrong coordinate count");
}

}  // namespace

void validate_point(const ModelSpace& s, const Point& p) {
  check_point_size(s, p);
  for (double c : p.x)
    if (!std::isfinite(c)) fail(errc::invalid_point, "non-finite coordinate");
  for_factors(s, [&](const FactorView& fv) {
    const double* x = p.x.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: break;
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        if (std::abs(minkowski(x, x, dim) + 1.0) > kPointTol) fail(errc::invalid_point, "not on the hyperboloid");
        if (x[0] <= 0.0) fail(errc::invalid_point, "wrong hyperboloid sheet");
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto m = as_matrix(x, p_, p_);
        if (!m.is_symmetric(1e-12 * std::max(1.0, m.max_abs()))) fail(errc::invalid_point, "SPD point not symmetric");
        const auto ed = eigh(m);
        if (ed.values.front() <= 1e-10) fail(errc::invalid_point, "SPD point not positive definite");
        break;
      }
    }
  });
}

void validate_isometry(const ModelSpace& s, const Isometry& g) {
  check_iso_size(s, g);
  for (double c : g.g)
    if (!std::isfinite(c)) fail(errc::invalid_isometry, "non-finite entry");
  for_factors(s, [&](const FactorView& fv) {
    const double* a = g.g.data() + fv.iso_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        const int n = fv.f.n;
        const auto q = as_matrix(a, n, n);
        if (((q.transposed() * q) - DenseMatrix::identity(n)).max_abs() > kIsometryTol)
          fail(errc::invalid_isometry, "linear part is not orthogonal");
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        const auto l = as_matrix(a, dim, dim);
        DenseMatrix j = DenseMatrix::identity(dim);
        j(0, 0) = -1.0;
        if ((l.transposed() * j * l - j).max_abs() > kIsometryTol)
          fail(errc::invalid_isometry, "matrix does not preserve the Minkowski form");
        double img0 = l(0, 0);  // image of the base point (1,0,...) has x0 = L00
        if (img0 <= 0.0) fail(errc::invalid_isometry, "matrix swaps hyperboloid sheets");
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto m = as_matrix(a, p_, p_);
        try {
          inverse(m);
        } catch (const Error&) {
          fail(errc::invalid_isometry, "congruence factor is singular");
        }
        break;
      }
    }
  });
}

double distance(const ModelSpace& s, const Point& x, const Point& y) {
  check_point_size(s, x);
  check_point_size(s, y);
  double sum = 0.0;
  for_factors(s, [&](const FactorView& fv) {
    const double* a = x.x.data() + fv.point_off;
    const double* b = y.x.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        for (int i = 0; i < fv.f.n; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        const double eps = hyperbolic_excess(a, b, dim);
        if (eps < -1e-9) fail(errc::numerical_degeneracy, "arccosh argument below 1");
        const double d = acosh_from_excess(eps);
        sum += d * d;
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto mx = as_matrix(a, p_, p_);
        const auto my = as_matrix(b, p_, p_);
        const auto xirt = spd_power(mx, -0.5);
        const auto smat = sym_part(xirt * my * xirt);
        const auto ed = eigh(smat);
        for (double v : ed.values) {
          if (v <= 0.0) fail(errc::numerical_degeneracy, "SPD eigenvalue underflow");
          const double lg = std::log(v);
          sum += lg * lg;
        }
        break;
      }
    }
  });
  return std::sqrt(sum);
}

Tangent log_map(const ModelSpace& s, const Point& x, const Point& y) {
  check_point_size(s, x);
  check_point_size(s, y);
  Tangent t;
  t.v.assign(s.point_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    const double* a = x.x.data() + fv.point_off;
    const double* b = y.x.data() + fv.point_off;
    double* out = t.v.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        for (int i = 0; i < fv.f.n; ++i) out[i] = b[i] - a[i];
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        const double eps = hyperbolic_excess(a, b, dim);
        if (eps < -1e-9) fail(errc::numerical_degeneracy, "arccosh argument below 1");
        const double theta = acosh_from_excess(eps);
        if (theta == 0.0) break;  // coincident points
        // y = cosh(theta) x + sinh(theta) w_hat with w = y - (1+eps) x,
        // ||w||_M = sinh(theta); the (y-x) - eps x form avoids cancellation.
        std::vector<double> w(dim);
        for (int i = 0; i < dim; ++i) w[i] = (b[i] - a[i]) - eps * a[i];
        const double w2 = minkowski(w.data(), w.data(), dim);
        if (w2 <= 0.0) break;
        const double scale = theta / std::sqrt(w2);
        for (int i = 0; i < dim; ++i) out[i] = scale * w[i];
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto mx = as_matrix(a, p_, p_);
        const auto my = as_matrix(b, p_, p_);
        const auto rt = spd_power(mx, 0.5);
        const auto irt = spd_power(mx, -0.5);
        const auto smat = sym_part(irt * my * irt);
        const auto lg = sym_apply(smat, [](double v) {
          if (v <= 0.0) fail(errc::numerical_degeneracy, "SPD eigenvalue underflow");
          return std::log(v);
        });
        write_matrix(sym_part(rt * lg * rt), out);
        break;
      }
    }
  });
  return t;
}

Point exp_map(const ModelSpace& s, const Point& x, const Tangent& v) {
  check_point_size(s, x);
  if (v.v.size() != x.x.size()) fail(errc::dimension_error, "tangent has wrong coordinate count");
  Point out;
  out.x.assign(s.point_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    const double* a = x.x.data() + fv.point_off;
    const double* w = v.v.data() + fv.point_off;
    double* o = out.x.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        for (int i = 0; i < fv.f.n; ++i) o[i] = a[i] + w[i];
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        const double n2 = minkowski(w, w, dim);
        if (n2 < -1e-12) fail(errc::numerical_degeneracy, "tangent with negative Minkowski norm");
        const double theta = std::sqrt(std::max(n2, 0.0));
        double ch, shr;  // cosh(theta), sinh(theta)/theta
        if (theta < 1e-6) {
          const double t2 = theta * theta;
          ch = 1.0 + t2 / 2.0 + t2 * t2 / 24.0;
          shr = 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
        } else {
          ch = std::cosh(theta);
          shr = std::sinh(theta) / theta;
        }
        for (int i = 0; i < dim; ++i) o[i] = ch * a[i] + shr * w[i];
        // Renormalize onto the sheet to stop drift over long iterations.
        const double q = -minkowski(o, o, dim);
        if (q <= 0.0) fail(errc::numerical_degeneracy, "exp left the hyperboloid");
        const double r = 1.0 / std::sqrt(q);
        for (int i = 0; i < dim; ++i) o[i] *= r;
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto mx = as_matrix(a, p_, p_);
        const auto mv = as_matrix(w, p_, p_);
        const auto rt = spd_power(mx, 0.5);
        const auto irt = spd_power(mx, -0.5);
        const auto inner_exp = sym_apply(sym_part(irt * mv * irt), [](double t) { return std::exp(t); });
        write_matrix(sym_part(rt * inner_exp * rt), o);
        break;
      }
    }
  });
  return out;
}

Point geodesic_point(const ModelSpace& s, const Point& x, const Point& y, double t) {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  return exp_map(s, x, log_map(s, x, y).scaled(t));
}

double inner(const ModelSpace& s, const Point& x, const Tangent& u, const Tangent& v) {
  check_point_size(s, x);
  double sum = 0.0;
  for_factors(s, [&](const FactorView& fv) {
    const double* a = x.x.data() + fv.point_off;
    const double* p = u.v.data() + fv.point_off;
    const double* q = v.v.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean:
        for (int i = 0; i < fv.f.n; ++i) sum += p[i] * q[i];
        break;
      case Factor::Kind::Hyperbolic:
        sum += minkowski(p, q, fv.f.n + 1);
        break;
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto xin = inverse(as_matrix(a, p_, p_));
        const auto mu = as_matrix(p, p_, p_);
        const auto mv = as_matrix(q, p_, p_);
        const auto prod = xin * mu * xin * mv;
        for (int i = 0; i < p_; ++i) sum += prod(i, i);
        break;
      }
    }
  });
  return sum;
}

double tangent_norm(const ModelSpace& s, const Point& x, const Tangent& u) {
  return std::sqrt(std::max(0.0, inner(s, x, u, u)));
}

Point frechet_mean(const ModelSpace& s, const std::vector<Point>& points, const std::vector<double>& weights,
                   const FrechetOptions& opts) {
  if (points.empty()) fail(errc::dimension_error, "mean of no points");
  if (points.size() != weights.size()) fail(errc::dimension_error, "weights do not match points");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) fail(errc::dimension_error, "negative weight");
    wsum += w;
  }
  if (wsum <= 0.0) fail(errc::dimension_error, "weights sum to zero");
  if (points.size() == 1) return points[0];

  // Fixed-point iteration x <- exp_x(mean log). On nonpositively curved
  // spaces the full step contracts near the minimum; the step factor only
  // shrinks if the gradient norm ever fails to decrease.
  Point x = points[0];
  double t = 1.0;
  double prev_grad = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    Tangent m;
    m.v.assign(s.point_size(), 0.0);
    double maxd = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
      if (weights[i] == 0.0) continue;
      auto l = log_map(s, x, points[i]);
      maxd = std::max(maxd, tangent_norm(s, x, l));
      m += l.scaled(weights[i]);
    }
    const double grad = tangent_norm(s, x, m);  // = ||sum w_i log(x, p_i)||
    // The 1e-15 floor keeps the relative criterion meaningful once the data
    // shrinks toward the precision of a single log evaluation.
    if (grad <= wsum * std::max(opts.rel_tol * maxd, 1e-15) || maxd == 0.0) return x;
    if (grad > prev_grad)
      t = std::max(t * 0.5, 1.0 / 64.0);
    else
      t = std::min(1.0, 2.0 * t);
    prev_grad = grad;
    x = exp_map(s, x, m.scaled(t / wsum));
  }
  fail(errc::no_convergence, "mean iteration cap exceeded");
}

Point apply_isometry(const ModelSpace& s, const Isometry& g, const Point& x) {
  check_iso_size(s, g);
  check_point_size(s, x);
  Point out;
  out.x.assign(s.point_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    const double* a = g.g.data() + fv.iso_off;
    const double* p = x.x.data() + fv.point_off;
    double* o = out.x.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        const int n = fv.f.n;
        for (int i = 0; i < n; ++i) {
          double acc = a[(size_t)n * n + i];  // translation entry
          for (int j = 0; j < n; ++j) acc += a[(size_t)i * n + j] * p[j];
          o[i] = acc;
        }
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        for (int i = 0; i < dim; ++i) {
          double acc = 0.0;
          for (int j = 0; j < dim; ++j) acc += a[(size_t)i * dim + j] * p[j];
          o[i] = acc;
        }
        const double q = -minkowski(o, o, dim);
        if (q <= 0.0) fail(errc::numerical_degeneracy, "isometry left the hyperboloid");
        const double r = 1.0 / std::sqrt(q);
        for (int i = 0; i < dim; ++i) o[i] *= r;
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        const auto gm = as_matrix(a, p_, p_);
        const auto xm = as_matrix(p, p_, p_);
        write_matrix(sym_part(gm * xm * gm.transposed()), o);
        break;
      }
    }
  });
  return out;
}

Isometry compose(const ModelSpace& s, const Isometry& g, const Isometry& h) {
  check_iso_size(s, g);
  check_iso_size(s, h);
  Isometry out;
  out.g.assign(s.isometry_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    const double* a = g.g.data() + fv.iso_off;
    const double* b = h.g.data() + fv.iso_off;
    double* o = out.g.data() + fv.iso_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        const int n = fv.f.n;
        const auto qa = as_matrix(a, n, n);
        const auto qb = as_matrix(b, n, n);
        write_matrix(qa * qb, o);
        for (int i = 0; i < n; ++i) {
          double acc = a[(size_t)n * n + i];
          for (int j = 0; j < n; ++j) acc += qa(i, j) * b[(size_t)n * n + j];
          o[(size_t)n * n + i] = acc;
        }
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        write_matrix(as_matrix(a, dim, dim) * as_matrix(b, dim, dim), o);
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        write_matrix(as_matrix(a, p_, p_) * as_matrix(b, p_, p_), o);
        break;
      }
    }
  });
  return out;
}

Isometry inverse_isometry(const ModelSpace& s, const Isometry& g) {
  check_iso_size(s, g);
  Isometry out;
  out.g.assign(s.isometry_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    const double* a = g.g.data() + fv.iso_off;
    double* o = out.g.data() + fv.iso_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: {
        const int n = fv.f.n;
        const auto qt = as_matrix(a, n, n).transposed();
        write_matrix(qt, o);
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += qt(i, j) * a[(size_t)n * n + j];
          o[(size_t)n * n + i] = -acc;
        }
        break;
      }
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        const auto l = as_matrix(a, dim, dim);
        DenseMatrix j = DenseMatrix::identity(dim);
        j(0, 0) = -1.0;
        write_matrix(j * l.transposed() * j, o);
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        write_matrix(inverse(as_matrix(a, p_, p_)), o);
        break;
      }
    }
  });
  return out;
}

Isometry identity_isometry(const ModelSpace& s) {
  Isometry g;
  g.g.assign(s.isometry_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    double* o = g.g.data() + fv.iso_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean:
        write_matrix(DenseMatrix::identity(fv.f.n), o);
        break;
      case Factor::Kind::Hyperbolic:
        write_matrix(DenseMatrix::identity(fv.f.n + 1), o);
        break;
      case Factor::Kind::Spd:
        write_matrix(DenseMatrix::identity(fv.f.n), o);
        break;
    }
  });
  return g;
}

double isometry_deviation(const ModelSpace& s, const Isometry& g, const Isometry& h) {
  check_iso_size(s, g);
  check_iso_size(s, h);
  double m = 0.0;
  for (size_t i = 0; i < g.g.size(); ++i) m = std::max(m, std::abs(g.g[i] - h.g[i]));
  return m;
}

double displacement(const ModelSpace& s, const std::vector<Isometry>& gens, const Point& x) {
  double sum = 0.0;
  for (const auto& g : gens) {
    const double d = distance(s, x, apply_isometry(s, g, x));
    sum += d * d;
  }
  return sum;
}

Point base_point(const ModelSpace& s) {
  Point p;
  p.x.assign(s.point_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    double* o = p.x.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean: break;
      case Factor::Kind::Hyperbolic: o[0] = 1.0; break;
      case Factor::Kind::Spd: write_matrix(DenseMatrix::identity(fv.f.n), o); break;
    }
  });
  return p;
}

Point random_point_near(const ModelSpace& s, const Point& x, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  Tangent t;
  t.v.assign(s.point_size(), 0.0);
  for_factors(s, [&](const FactorView& fv) {
    double* o = t.v.data() + fv.point_off;
    const double* a = x.x.data() + fv.point_off;
    switch (fv.f.kind) {
      case Factor::Kind::Euclidean:
        for (int i = 0; i < fv.f.n; ++i) o[i] = gauss(rng);
        break;
      case Factor::Kind::Hyperbolic: {
        const int dim = fv.f.n + 1;
        std::vector<double> raw(dim);
        for (int i = 1; i < dim; ++i) raw[i] = gauss(rng);
        raw[0] = 0.0;
        // Project to the tangent space at a: v + <a,v>_M a.
        const double ip = minkowski(a, raw.data(), dim);
        for (int i = 0; i < dim; ++i) o[i] = raw[i] + ip * a[i];
        break;
      }
      case Factor::Kind::Spd: {
        const int p_ = fv.f.n;
        DenseMatrix v(p_, p_);
        for (int i = 0; i < p_; ++i)
          for (int j = i; j < p_; ++j) v(i, j) = v(j, i) = gauss(rng);
        write_matrix(v, o);
        break;
      }
    }
  });
  return exp_map(s, x, t);
}

Isometry euclidean_isometry(const ModelSpace& s, const DenseMatrix& q, const std::vector<double>& t) {
  if (s.factors().size() != 1 || s.factors()[0].kind != Factor::Kind::Euclidean)
    fail(errc::invalid_isometry, "space is not a single euclidean factor");
  const int n = s.factors()[0].n;
  if (q.rows() != n || q.cols() != n || (int)t.size() != n) fail(errc::dimension_error, "bad isometry data");
  Isometry g;
  g.g.assign(s.isometry_size(), 0.0);
  write_matrix(q, g.g.data());
  std::copy(t.begin(), t.end(), g.g.begin() + (size_t)n * n);
  validate_isometry(s, g);
  return g;
}

Isometry euclidean_translation(const ModelSpace& s, const std::vector<double>& t) {
  const int n = s.factors()[0].n;
  return euclidean_isometry(s, DenseMatrix::identity(n), t);
}

Isometry euclidean_rotation_2d(const ModelSpace& s, double theta) {
  DenseMatrix q(2, 2);
  q(0, 0) = std::cos(theta);
  q(0, 1) = -std::sin(theta);
  q(1, 0) = std::sin(theta);
  q(1, 1) = std::cos(theta);
  return euclidean_isometry(s, q, {0.0, 0.0});
}

Isometry hyperbolic_matrix(const ModelSpace& s, const DenseMatrix& l) {
  if (s.factors().size() != 1 || s.factors()[0].kind != Factor::Kind::Hyperbolic)
    fail(errc::invalid_isometry, "space is not a single hyperbolic factor");
  Isometry g;
  g.g.assign(s.isometry_size(), 0.0);
  write_matrix(l, g.g.data());
  validate_isometry(s, g);
  return g;
}

Isometry hyperbolic_rotation_2d(const ModelSpace& s, double theta) {
  DenseMatrix l = DenseMatrix::identity(3);
  l(1, 1) = std::cos(theta);
  l(1, 2) = -std::sin(theta);
  l(2, 1) = std::sin(theta);
  l(2, 2) = std::cos(theta);
  return hyperbolic_matrix(s, l);
}

Isometry hyperbolic_boost(const ModelSpace& s, double length) {
  const int dim = s.factors()[0].n + 1;
  DenseMatrix l = DenseMatrix::identity(dim);
  l(0, 0) = std::cosh(length);
  l(0, 1) = std::sinh(length);
  l(1, 0) = std::sinh(length);
  l(1, 1) = std::cosh(length);
  return hyperbolic_matrix(s, l);
}

Isometry hyperbolic_parabolic_2d(const ModelSpace& s, double shear) {
  // Fixes the ideal point (1,1,0)/sqrt(2) only; translation length zero.
  const double t = shear;
  DenseMatrix l(3, 3);
  l(0, 0) = 1.0 + t * t / 2.0;
  l(0, 1) = -t * t / 2.0;
  l(0, 2) = t;
  l(1, 0) = t * t / 2.0;
  l(1, 1) = 1.0 - t * t / 2.0;
  l(1, 2) = t;
  l(2, 0) = t;
  l(2, 1) = -t;
  l(2, 2) = 1.0;
  return hyperbolic_matrix(s, l);
}

Isometry spd_congruence(const ModelSpace& s, const DenseMatrix& g) {
  if (s.factors().size() != 1 || s.factors()[0].kind != Factor::Kind::Spd)
    fail(errc::invalid_isometry, "space is not a single spd factor");
  Isometry out;
  out.g.assign(s.isometry_size(), 0.0);
  write_matrix(g, out.g.data());
  validate_isometry(s, out);
  return out;
}

Isometry product_isometry(const ModelSpace& s, const std::vector<Isometry>& parts) {
  Isometry out;
  out.g.reserve(s.isometry_size());
  for (const auto& part : parts) out.g.insert(out.g.end(), part.g.begin(), part.g.end());
  check_iso_size(s, out);
  return out;
}

Point product_point(const ModelSpace& s, const std::vector<Point>& parts) {
  Point out;
  out.x.reserve(s.point_size());
  for (const auto& part : parts) out.x.insert(out.x.end(), part.x.begin(), part.x.end());
  check_point_size(s, out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON encodings

namespace {

nlohmann::ordered_json factor_to_json(const Factor& f) {
  switch (f.kind) {
    case Factor::Kind::Euclidean: return {{"kind", "euclidean"}, {"n", f.n}};
    case Factor::Kind::Hyperbolic: return {{"kind", "hyperbolic"}, {"n", f.n}};
    case Factor::Kind::Spd: return {{"kind", "spd"}, {"p", f.n}};
  }
  return {};
}

ModelSpace factor_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") return ModelSpace::euclidean(j.at("n").get<int>());
  if (kind == "hyperbolic") return ModelSpace::hyperbolic(j.at("n").get<int>());
  if (kind == "spd") return ModelSpace::spd(j.at("p").get<int>());
  fail(errc::malformed_input, "unknown factor kind '" + kind + "'");
}

std::vector<double> doubles_from_json(const nlohmann::json& j, size_t want, const char* what) {
  if (!j.is_array() || j.size() != want) fail(errc::malformed_input, std::string(what) + " has wrong length");
  std::vector<double> out;
  out.reserve(want);
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

}  // namespace

nlohmann::ordered_json space_to_json(const ModelSpace& s) {
  nlohmann::ordered_json j;
  j["factors"] = nlohmann::ordered_json::array();
  for (const auto& f : s.factors()) j["factors"].push_back(factor_to_json(f));
  return j;
}

ModelSpace space_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("factors")) {
      std::vector<ModelSpace> parts;
      for (const auto& f : j.at("factors")) parts.push_back(factor_from_json(f));
      return ModelSpace::product(parts);
    }
    return factor_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("space JSON: ") + e.what());
  }
}

nlohmann::ordered_json point_to_json(const ModelSpace& s, const Point& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (size_t i = 0; i < s.factors().size(); ++i) {
    const int off = s.point_offset((int)i);
    const int len = s.factors()[i].point_size();
    j.push_back(std::vector<double>(p.x.begin() + off, p.x.begin() + off + len));
  }
  return j;
}

Point point_from_json(const ModelSpace& s, const nlohmann::json& j) {
  if (!j.is_array() || j.size() != s.factors().size())
    fail(errc::malformed_input, "point JSON must list one block per factor");
  Point p;
  for (size_t i = 0; i < s.factors().size(); ++i) {
    auto block = doubles_from_json(j[i], s.factors()[i].point_size(), "point block");
    p.x.insert(p.x.end(), block.begin(), block.end());
  }
  validate_point(s, p);
  return p;
}

nlohmann::ordered_json isometry_to_json(const ModelSpace& s, const Isometry& g) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (size_t i = 0; i < s.factors().size(); ++i) {
    const auto& f = s.factors()[i];
    const int off = s.isometry_offset((int)i);
    nlohmann::ordered_json block;
    switch (f.kind) {
      case Factor::Kind::Euclidean:
        block["linear"] = std::vector<double>(g.g.begin() + off, g.g.begin() + off + f.n * f.n);
        block["translation"] = std::vector<double>(g.g.begin() + off + f.n * f.n, g.g.begin() + off + f.n * f.n + f.n);
        break;
      case Factor::Kind::Hyperbolic:
        block["matrix"] = std::vector<double>(g.g.begin() + off, g.g.begin() + off + (f.n + 1) * (f.n + 1));
        break;
      case Factor::Kind::Spd:
        block["g"] = std::vector<double>(g.g.begin() + off, g.g.begin() + off + f.n * f.n);
        break;
    }
    j.push_back(block);
  }
  return j;
}

Isometry isometry_from_json(const ModelSpace& s, const nlohmann::json& j) {
  const nlohmann::json* arr = &j;
  nlohmann::json wrapped;
  if (!j.is_array()) {
    wrapped = nlohmann::json::array({j});
    arr = &wrapped;
  }
  if (arr->size() != s.factors().size()) fail(errc::malformed_input, "isometry JSON must list one block per factor");
  Isometry g;
  try {
    for (size_t i = 0; i < s.factors().size(); ++i) {
      const auto& f = s.factors()[i];
      const auto& block = (*arr)[i];
      switch (f.kind) {
        case Factor::Kind::Euclidean: {
          auto lin = doubles_from_json(block.at("linear"), (size_t)f.n * f.n, "linear block");
          auto tr = doubles_from_json(block.at("translation"), (size_t)f.n, "translation block");
          g.g.insert(g.g.end(), lin.begin(), lin.end());
          g.g.insert(g.g.end(), tr.begin(), tr.end());
          break;
        }
        case Factor::Kind::Hyperbolic: {
          auto m = doubles_from_json(block.at("matrix"), (size_t)(f.n + 1) * (f.n + 1), "matrix block");
          g.g.insert(g.g.end(), m.begin(), m.end());
          break;
        }
        case Factor::Kind::Spd: {
          auto m = doubles_from_json(block.at("g"), (size_t)f.n * f.n, "g block");
          g.g.insert(g.g.end(), m.begin(), m.end());
          break;
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::malformed_input, std::string("isometry JSON: ") + e.what());
  }
  validate_isometry(s, g);
  return g;
}

}  // namespace linklab
