#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "linklab/errors.hpp"

namespace linklab {

/// Finite field F_q, q = p^k, in a polynomial basis F_p[x]/(modulus).
///
/// Elements are integer indices 0..q-1 encoding coefficient vectors in base p,
/// little-endian: index = c0 + c1*p + ... + c_{k-1}*p^{k-1}. This order is the
/// canonical enumeration used everywhere downstream (graph vertex order, JSON
/// output), so it must never change.
///
/// The modulus is the first irreducible monic polynomial of degree k in that
/// same encoding order, found by exhaustive search with trial division.
/// Immutable after construction; all operations are pure table lookups.
class FiniteField {
 public:
  static constexpr int kDefaultOrderCap = 1024;

  FiniteField() = default;  // empty placeholder; use create()

  static FiniteField create(int p, int k, int order_cap = kDefaultOrderCap);

  int p() const { return p_; }
  int k() const { return k_; }
  int q() const { return q_; }

  /// Modulus coefficients c0..ck (monic, so back() == 1); size k+1.
  const std::vector<int>& modulus() const { return modulus_; }

  int zero() const { return 0; }
  int one() const { return 1; }

  int add(int a, int b) const { return add_[idx(a, b)]; }
  int sub(int a, int b) const { return add_[idx(a, neg_[check(b)])]; }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }
  int neg(int a) const { return neg_[check(a)]; }
  int inv(int a) const {
    if (check(a) == 0) fail(errc::division_by_zero, "inverse of zero");
    return inv_[a];
  }
  int pow(int a, long long e) const;

  /// Little-endian coefficient vector of an element (size k).
  std::vector<int> coeffs(int a) const;
  int from_coeffs(const std::vector<int>& c) const;

  bool operator==(const FiniteField& o) const { return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_; }

 private:
  int idx(int a, int b) const { return check(a) * q_ + check(b); }
  int check(int a) const {
    if (a < 0 || a >= q_) fail(errc::field_mismatch, "element index out of range");
    return a;
  }

  int p_ = 0, k_ = 0, q_ = 0;
  std::vector<int> modulus_;
  std::vector<uint16_t> add_, mul_;
  std::vector<uint16_t> neg_, inv_;
};

/// Element bound to its field; operators check that both operands agree.
class FieldElement {
 public:
  FieldElement(const FiniteField& field, int index) : field_(&field), index_(index) { field.coeffs(index); }

  int index() const { return index_; }
  const FiniteField& field() const { return *field_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.same(b);
    return {*a.field_, a.field_->add(a.index(), b.index())};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.same(b);
    return {*a.field_, a.field_->sub(a.index(), b.index())};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.same(b);
    return {*a.field_, a.field_->mul(a.index(), b.index())};
  }
  friend FieldElement operator-(const FieldElement& a) { return {*a.field_, a.field_->neg(a.index())}; }
  FieldElement inverse() const { return {*field_, field_->inv(index())}; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    a.same(b);
    return a.index() == b.index();
  }

 private:
  void same(const FieldElement& b) const {
    if (!(*field_ == *b.field_)) fail(errc::field_mismatch, "elements belong to different fields");
  }

  const FiniteField* field_;
  int index_;
};

namespace poly {
// Polynomials over F_p as little-endian coefficient vectors, helpers exposed
// for tests that want an independent route to the same arithmetic.
std::vector<int> mod_reduce(std::vector<int> a, const std::vector<int>& m, int p);
std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b, int p);
bool is_irreducible(const std::vector<int>& m, int p);
}  // namespace poly

}  // namespace linklab
