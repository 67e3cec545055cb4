#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "linklab/errors.hpp"
#include "linklab/quaternion.hpp"

namespace linklab {

enum class ScalarField { R, C, H };

std::string scalar_field_name(ScalarField f);
ScalarField scalar_field_from_name(const std::string& s);

template <typename K>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double conjugate(double a) { return a; }
  static double abs2(double a) { return a * a; }
  static double random(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return g(rng);
  }
};

template <>
struct ScalarTraits<std::complex<double>> {
  static std::complex<double> conjugate(std::complex<double> a) { return std::conj(a); }
  static double abs2(std::complex<double> a) { return std::norm(a); }
  static std::complex<double> random(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
  }
};

template <>
struct ScalarTraits<Quaternion> {
  static Quaternion conjugate(const Quaternion& a) { return conj(a); }
  static double abs2(const Quaternion& a) { return norm2(a); }
  static Quaternion random(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng), g(rng), g(rng)};
  }
};

/// Dense matrix over R, C or H. Quaternionic entries multiply in the order
/// written, so the usual row-by-column product is the left action matching
/// right scalar multiplication on vectors.
template <typename K>
class KMat {
 public:
  KMat() = default;
  KMat(int rows, int cols) : rows_(rows), cols_(cols), a_((size_t)rows * cols, K(0)) {}

  static KMat identity(int n) {
    KMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  K& operator()(int i, int j) { return a_[(size_t)i * cols_ + j]; }
  const K& operator()(int i, int j) const { return a_[(size_t)i * cols_ + j]; }

  KMat adjoint() const {
    KMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = ScalarTraits<K>::conjugate((*this)(i, j));
    return t;
  }

  friend KMat operator*(const KMat& a, const KMat& b) {
    if (a.cols_ != b.rows_) fail(errc::dimension_error, "product shape mismatch");
    KMat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const K& aik = a(i, k);
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend KMat operator+(const KMat& a, const KMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(errc::dimension_error, "sum shape mismatch");
    KMat c = a;
    for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
    return c;
  }
  friend KMat operator-(const KMat& a, const KMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(errc::dimension_error, "diff shape mismatch");
    KMat c = a;
    for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
    return c;
  }
  KMat negated() const {
    KMat c = *this;
    for (auto& v : c.a_) v = -v;
    return c;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, ScalarTraits<K>::abs2(v));
    return std::sqrt(m);
  }
  double frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += ScalarTraits<K>::abs2(v);
    return std::sqrt(s);
  }

  /// Inverse by left row reduction of [A | I]; valid over division rings.
  KMat inverted() const {
    if (rows_ != cols_) fail(errc::dimension_error, "inverse of non-square matrix");
    const int n = rows_;
    KMat a = *this;
    KMat inv = identity(n);
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = ScalarTraits<K>::abs2(a(col, col));
      for (int r = col + 1; r < n; ++r) {
        const double v = ScalarTraits<K>::abs2(a(r, col));
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best < 1e-24) fail(errc::rank_deficient, "singular matrix");
      if (piv != col)
        for (int j = 0; j < n; ++j) {
          std::swap(a(col, j), a(piv, j));
          std::swap(inv(col, j), inv(piv, j));
        }
      const K pinv = k_inverse(a(col, col));
      for (int j = 0; j < n; ++j) {
        a(col, j) = pinv * a(col, j);
        inv(col, j) = pinv * inv(col, j);
      }
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const K factor = a(r, col);
        if (ScalarTraits<K>::abs2(factor) == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          a(r, j) -= factor * a(col, j);
          inv(r, j) -= factor * inv(col, j);
        }
      }
    }
    return inv;
  }

  KMat block(int i0, int j0, int rows, int cols) const {
    KMat b(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
  }
  void set_block(int i0, int j0, const KMat& b) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }

 private:
  static K k_inverse(const K& v) {
    if constexpr (std::is_same_v<K, Quaternion>)
      return inverse(v);
    else
      return K(1) / v;
  }

  int rows_ = 0, cols_ = 0;
  std::vector<K> a_;
};

/// Sesquilinear form [[0,I_q,0],[I_q,0,0],[0,0,J]] with
/// J = diag(-I_{p-q}, I_{n3-(p-q)}); the trailing block is the finite
/// truncation of the infinite positive part.
template <typename K>
struct FormMatrix {
  int q_iso = 0, p = 0, n3 = 0;
  KMat<K> Q;

  int dim() const { return 2 * q_iso + n3; }
  int neg_block() const { return p - q_iso; }

  KMat<K> Jmat() const {
    KMat<K> j(n3, n3);
    for (int i = 0; i < n3; ++i) j(i, i) = K(i < neg_block() ? -1 : 1);
    return j;
  }
};

template <typename K>
FormMatrix<K> standard_form(int q_iso, int p, int n3) {
  if (q_iso < 1 || p < q_iso || n3 < p - q_iso)
    fail(errc::dimension_error, "need 1 <= q <= p <= q + n3");
  if (n3 > 64) fail(errc::dimension_error, "truncation n3 capped at 64");
  FormMatrix<K> f;
  f.q_iso = q_iso;
  f.p = p;
  f.n3 = n3;
  const int n = f.dim();
  f.Q = KMat<K>(n, n);
  for (int i = 0; i < q_iso; ++i) {
    f.Q(i, q_iso + i) = K(1);
    f.Q(q_iso + i, i) = K(1);
  }
  f.Q.set_block(2 * q_iso, 2 * q_iso, f.Jmat());
  return f;
}

template <typename K>
double preserves_form(const KMat<K>& g, const FormMatrix<K>& f) {
  if (g.rows() != f.dim() || g.cols() != f.dim()) fail(errc::dimension_error, "element size mismatch");
  return (g.adjoint() * f.Q * g - f.Q).max_abs();
}

/// Boundary-point stabilizer element in block form
/// [[M, Y, -M B* J R], [0, (M*)^{-1}, 0], [0, B, R]].
template <typename K>
struct ParabolicElement {
  KMat<K> M, Y, B, R;
  KMat<K> g;  // assembled matrix
};

template <typename K>
struct LeviElement {
  KMat<K> M, R;
  KMat<K> g;  // diag(M, (M*)^{-1}, R)
};

template <typename K>
KMat<K> assemble_parabolic(const FormMatrix<K>& f, const KMat<K>& m, const KMat<K>& y, const KMat<K>& b,
                           const KMat<K>& r) {
  const int q = f.q_iso;
  KMat<K> g(f.dim(), f.dim());
  g.set_block(0, 0, m);
  g.set_block(0, q, y);
  g.set_block(0, 2 * q, (m * b.adjoint() * f.Jmat() * r).negated());
  g.set_block(q, q, m.adjoint().inverted());
  g.set_block(2 * q, q, b);
  g.set_block(2 * q, 2 * q, r);
  return g;
}

template <typename K>
ParabolicElement<K> make_parabolic(const FormMatrix<K>& f, const KMat<K>& m, const KMat<K>& y, const KMat<K>& b,
                                   const KMat<K>& r, double tol = 1e-10) {
  const int q = f.q_iso, n3 = f.n3;
  if (m.rows() != q || m.cols() != q || y.rows() != q || y.cols() != q || b.rows() != n3 || b.cols() != q ||
      r.rows() != n3 || r.cols() != n3)
    fail(errc::dimension_error, "block sizes do not match the form");
  const auto j = f.Jmat();
  const double r_resid = (r.adjoint() * j * r - j).max_abs();
  if (r_resid > tol)
    fail(errc::constraint_violated, "R does not preserve J, residual " + std::to_string(r_resid));
  KMat<K> minv;
  try {
    minv = m.inverted();
  } catch (const Error&) {
    fail(errc::constraint_violated, "M is not invertible");
  }
  const auto miy = minv * y;
  const double y_resid = (miy + miy.adjoint() + b.adjoint() * j * b).max_abs();
  if (y_resid > tol)
    fail(errc::constraint_violated, "Y condition violated, residual " + std::to_string(y_resid));

  ParabolicElement<K> e;
  e.M = m;
  e.Y = y;
  e.B = b;
  e.R = r;
  e.g = assemble_parabolic(f, m, y, b, r);
  const double form_resid = preserves_form(e.g, f);
  if (form_resid > tol)
    fail(errc::constraint_violated, "assembled element broke the form, residual " + std::to_string(form_resid));
  return e;
}

template <typename K>
ParabolicElement<K> make_nil(const FormMatrix<K>& f, const KMat<K>& y, const KMat<K>& b, double tol = 1e-10) {
  return make_parabolic(f, KMat<K>::identity(f.q_iso), y, b, KMat<K>::identity(f.n3), tol);
}

template <typename K>
LeviElement<K> levi_element(const FormMatrix<K>& f, const KMat<K>& m, const KMat<K>& r) {
  const int q = f.q_iso;
  LeviElement<K> l;
  l.M = m;
  l.R = r;
  l.g = KMat<K>(f.dim(), f.dim());
  l.g.set_block(0, 0, m);
  l.g.set_block(q, q, m.adjoint().inverted());
  l.g.set_block(2 * q, 2 * q, r);
  return l;
}

/// g = nil * levi with nil = (Y M*, B M*) and levi = diag(M, (M*)^{-1}, R).
template <typename K>
std::pair<ParabolicElement<K>, LeviElement<K>> parabolic_decompose(const FormMatrix<K>& f,
                                                                   const ParabolicElement<K>& e) {
  const auto mstar = e.M.adjoint();
  const auto nil = make_nil(f, e.Y * mstar, e.B * mstar);
  return {nil, levi_element(f, e.M, e.R)};
}

/// Nil product in (Y,B) coordinates: (Y1 + Y2 - B1* J B2, B1 + B2).
template <typename K>
ParabolicElement<K> nil_multiply(const FormMatrix<K>& f, const ParabolicElement<K>& a,
                                 const ParabolicElement<K>& b) {
  return make_nil(f, a.Y + b.Y - a.B.adjoint() * f.Jmat() * b.B, a.B + b.B);
}

template <typename K>
ParabolicElement<K> nil_inverse(const FormMatrix<K>& f, const ParabolicElement<K>& a) {
  return make_nil(f, a.Y.negated() - a.B.adjoint() * f.Jmat() * a.B, a.B.negated());
}

template <typename K>
ParabolicElement<K> nil_commutator(const FormMatrix<K>& f, const ParabolicElement<K>& a,
                                   const ParabolicElement<K>& b) {
  return nil_multiply(f, nil_multiply(f, a, b), nil_multiply(f, nil_inverse(f, a), nil_inverse(f, b)));
}

/// levi n levi^{-1} = nil(M Y M*, R B M*); requires R* J R = J.
template <typename K>
ParabolicElement<K> conjugate_by_levi(const FormMatrix<K>& f, const ParabolicElement<K>& n, const KMat<K>& m,
                                      const KMat<K>& r, double tol = 1e-10) {
  const auto j = f.Jmat();
  const double r_resid = (r.adjoint() * j * r - j).max_abs();
  if (r_resid > tol)
    fail(errc::constraint_violated, "R does not preserve J, residual " + std::to_string(r_resid));
  KMat<K> minv;
  try {
    minv = m.inverted();
  } catch (const Error&) {
    fail(errc::constraint_violated, "M is not invertible");
  }
  const auto mstar = m.adjoint();
  return make_nil(f, m * n.Y * mstar, r * n.B * mstar, 1e-8);
}

/// True iff v* Q w vanishes on all basis pairs; RankDeficient for dependent
/// input. Basis vectors are the columns of `basis`.
template <typename K>
bool isotropic_check(const KMat<K>& basis, const FormMatrix<K>& f, double tol = 1e-12) {
  if (basis.rows() != f.dim()) fail(errc::dimension_error, "basis vectors have the wrong length");
  // Rank via left row reduction.
  KMat<K> a = basis.adjoint();  // rows = vectors
  const int rows = a.rows(), cols = a.cols();
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    double best = 1e-20;
    for (int r = rank; r < rows; ++r) {
      const double v = ScalarTraits<K>::abs2(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) continue;
    if (piv != rank)
      for (int jj = 0; jj < cols; ++jj) std::swap(a(rank, jj), a(piv, jj));
    for (int r = rank + 1; r < rows; ++r) {
      K factor;
      if constexpr (std::is_same_v<K, Quaternion>)
        factor = a(r, col) * inverse(a(rank, col));
      else
        factor = a(r, col) / a(rank, col);
      for (int jj = 0; jj < cols; ++jj) a(r, jj) -= factor * a(rank, jj);
    }
    ++rank;
  }
  if (rank < basis.cols()) fail(errc::rank_deficient, "basis is linearly dependent");
  return (basis.adjoint() * f.Q * basis).max_abs() <= tol;
}

// Seeded random generators used by the verification trials.

template <typename K>
KMat<K> random_kmat(int rows, int cols, std::mt19937_64& rng) {
  KMat<K> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = ScalarTraits<K>::random(rng);
  return m;
}

/// Gram-Schmidt orthonormalization of Gaussian columns; right scalar
/// multiplication keeps the quaternionic case consistent.
template <typename K>
KMat<K> random_unitary(int n, std::mt19937_64& rng) {
  KMat<K> m = random_kmat<K>(n, n, rng);
  for (int j = 0; j < n; ++j) {
    for (int prev = 0; prev < j; ++prev) {
      K ip(0);
      for (int i = 0; i < n; ++i) ip += ScalarTraits<K>::conjugate(m(i, prev)) * m(i, j);
      for (int i = 0; i < n; ++i) m(i, j) -= m(i, prev) * ip;
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += ScalarTraits<K>::abs2(m(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) return random_unitary<K>(n, rng);  // resample degenerate draw
    for (int i = 0; i < n; ++i) m(i, j) = m(i, j) * (1.0 / nrm);
  }
  return m;
}

/// Invertible matrix with eigenvalue magnitudes in [1/2, 2].
template <typename K>
KMat<K> random_conditioned_gl(int n, std::mt19937_64& rng) {
  const auto u1 = random_unitary<K>(n, rng);
  const auto u2 = random_unitary<K>(n, rng);
  std::uniform_real_distribution<double> d(0.5, 2.0);
  KMat<K> diag(n, n);
  for (int i = 0; i < n; ++i) diag(i, i) = K(1) * d(rng);
  return u1 * diag * u2;
}

/// Block-diagonal element of the compact part O(p-q) x O(rest).
template <typename K>
KMat<K> random_compact_r(const FormMatrix<K>& f, std::mt19937_64& rng) {
  KMat<K> r(f.n3, f.n3);
  const int neg = f.neg_block();
  if (neg > 0) r.set_block(0, 0, random_unitary<K>(neg, rng));
  if (f.n3 - neg > 0) r.set_block(neg, neg, random_unitary<K>(f.n3 - neg, rng));
  return r;
}

/// Generic element with R* J R = J: compact * hyperbolic boost * compact.
template <typename K>
KMat<K> random_indefinite_r(const FormMatrix<K>& f, std::mt19937_64& rng) {
  auto r = random_compact_r(f, rng);
  const int neg = f.neg_block();
  if (neg > 0 && f.n3 - neg > 0) {
    std::uniform_real_distribution<double> td(0.0, 0.8);
    const double t = td(rng);
    K u = ScalarTraits<K>::random(rng);
    const double un = std::sqrt(ScalarTraits<K>::abs2(u));
    u = un > 1e-12 ? u * (1.0 / un) : K(1);
    KMat<K> boost = KMat<K>::identity(f.n3);
    const int i = 0, j = neg;  // one negative and one positive direction
    boost(i, i) = K(1) * std::cosh(t);
    boost(j, j) = K(1) * std::cosh(t);
    boost(i, j) = u * std::sinh(t);
    boost(j, i) = ScalarTraits<K>::conjugate(u) * std::sinh(t);
    r = r * boost * random_compact_r(f, rng);
  }
  return r;
}

template <typename K>
ParabolicElement<K> random_nil(const FormMatrix<K>& f, std::mt19937_64& rng) {
  const int q = f.q_iso;
  const auto b = random_kmat<K>(f.n3, q, rng);
  const auto s = random_kmat<K>(q, q, rng);
  const auto skew = (s - s.adjoint()).block(0, 0, q, q);
  KMat<K> y = skew;
  const auto sym = b.adjoint() * f.Jmat() * b;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) y(i, j) -= sym(i, j) * 0.5;
  return make_nil(f, y, b);
}

template <typename K>
ParabolicElement<K> random_parabolic(const FormMatrix<K>& f, std::mt19937_64& rng) {
  const int q = f.q_iso;
  const auto m = random_conditioned_gl<K>(q, rng);
  const auto r = random_indefinite_r<K>(f, rng);
  const auto b = random_kmat<K>(f.n3, q, rng);
  const auto s = random_kmat<K>(q, q, rng);
  const auto skew = (s - s.adjoint()).block(0, 0, q, q);
  KMat<K> inner = skew;
  const auto sym = b.adjoint() * f.Jmat() * b;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) inner(i, j) -= sym(i, j) * 0.5;
  return make_parabolic(f, m, m * inner, b, r, 1e-8);
}

/// Maximal residuals over seeded random trials of every identity the block
/// decomposition is supposed to satisfy.
struct TrialReport {
  ScalarField field;
  int q = 0, p = 0, n3 = 0;
  int trials = 0;
  uint64_t seed = 0;
  double form_residual = 0.0;           // g* Q g = Q after assembly
  double decompose_residual = 0.0;      // g = nil * levi
  double projection_residual = 0.0;     // levi(g1 g2) = levi(g1) levi(g2)
  double closure_residual = 0.0;        // products/inverses still preserve Q
  double commutator_b_residual = 0.0;   // B block of [N,N] vanishes
  double double_commutator = 0.0;       // [[N,N],[N,N]] = identity
  double levi_norm_residual = 0.0;      // compact conjugation preserves norms
  double homomorphism_b_residual = 0.0; // B block adds under nil products
};

TrialReport parabolic_trials(ScalarField field, int q_iso, int p, int n3, int trials, uint64_t seed);

std::string trial_report_to_json(const TrialReport& r);

/// Signature (positive, negative) of the form by realification and a real
/// symmetric eigensolve; complex entries double the counts, quaternionic
/// entries quadruple them, and the result is scaled back.
std::pair<int, int> form_signature(ScalarField field, int q_iso, int p, int n3);

}  // namespace linklab
