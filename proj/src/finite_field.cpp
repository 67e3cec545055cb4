#include "linklab/finite_field.hpp"

#include <algorithm>

namespace linklab {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; (long long)d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void trim(std::vector<int>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

}  // namespace

namespace poly {

std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  trim(out);
  return out;
}

// Remainder of a modulo monic m.
std::vector<int> mod_reduce(std::vector<int> a, const std::vector<int>& m, int p) {
  trim(a);
  const int dm = (int)m.size() - 1;
  while ((int)a.size() - 1 >= dm) {
    const int shift = (int)a.size() - 1 - dm;
    const int lead = a.back();
    for (int i = 0; i <= dm; ++i) {
      int& c = a[i + shift];
      c = ((c - lead * m[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

bool is_irreducible(const std::vector<int>& m, int p) {
  const int k = (int)m.size() - 1;
  if (k <= 0) return false;
  if (m[0] == 0) return k == 1;  // divisible by x
  if (k == 1) return true;
  // Trial division by every monic polynomial of degree 1..k/2.
  for (int d = 1; 2 * d <= k; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      std::vector<int> div(d + 1, 0);
      long long c = code;
      for (int i = 0; i < d; ++i) {
        div[i] = (int)(c % p);
        c /= p;
      }
      div[d] = 1;
      if (mod_reduce(m, div, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace poly

FiniteField FiniteField::create(int p, int k, int order_cap) {
  if (!is_prime(p)) fail(errc::not_prime, "p = " + std::to_string(p));
  if (k < 1) fail(errc::dimension_error, "extension degree must be >= 1");
  long long q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > order_cap) fail(errc::order_too_large, "p^k exceeds cap " + std::to_string(order_cap));
  }

  FiniteField f;
  f.p_ = p;
  f.k_ = k;
  f.q_ = (int)q;

  if (k == 1) {
    f.modulus_ = {0, 1};  // F_p[x]/(x)
  } else {
    // First irreducible monic modulus in canonical encoding order.
    bool found = false;
    for (long long code = 0; code < q && !found; ++code) {
      std::vector<int> m(k + 1, 0);
      long long c = code;
      for (int i = 0; i < k; ++i) {
        m[i] = (int)(c % p);
        c /= p;
      }
      m[k] = 1;
      if (poly::is_irreducible(m, p)) {
        f.modulus_ = m;
        found = true;
      }
    }
    if (!found) fail(errc::no_irreducible_found, "no irreducible modulus of degree " + std::to_string(k));
  }

  const int n = f.q_;
  f.add_.resize((size_t)n * n);
  f.mul_.resize((size_t)n * n);
  f.neg_.resize(n);
  f.inv_.assign(n, 0);

  auto decode = [&](int a) {
    std::vector<int> c(k, 0);
    for (int i = 0; i < k; ++i) {
      c[i] = a % p;
      a /= p;
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    int a = 0;
    for (int i = k - 1; i >= 0; --i) a = a * p + (i < (int)c.size() ? c[i] : 0);
    return a;
  };

  for (int a = 0; a < n; ++a) {
    const auto ca = decode(a);
    std::vector<int> nc(k);
    for (int i = 0; i < k; ++i) nc[i] = (p - ca[i]) % p;
    f.neg_[a] = (uint16_t)encode(nc);
    for (int b = 0; b < n; ++b) {
      const auto cb = decode(b);
      std::vector<int> sum(k);
      for (int i = 0; i < k; ++i) sum[i] = (ca[i] + cb[i]) % p;
      f.add_[(size_t)a * n + b] = (uint16_t)encode(sum);
      auto prod = poly::mod_reduce(poly::mul(ca, cb, p), f.modulus_, p);
      f.mul_[(size_t)a * n + b] = (uint16_t)encode(prod);
    }
  }
  for (int a = 1; a < n; ++a) {
    for (int b = 1; b < n; ++b) {
      if (f.mul_[(size_t)a * n + b] == 1) {
        f.inv_[a] = (uint16_t)b;
        break;
      }
    }
    if (f.inv_[a] == 0) fail(errc::structure_mismatch, "element without inverse; modulus not irreducible?");
  }
  return f;
}

int FiniteField::pow(int a, long long e) const {
  check(a);
  if (e < 0) return pow(inv(a), -e);
  int r = 1, base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::vector<int> FiniteField::coeffs(int a) const {
  check(a);
  std::vector<int> c(k_, 0);
  for (int i = 0; i < k_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

int FiniteField::from_coeffs(const std::vector<int>& c) const {
  int a = 0;
  for (int i = k_ - 1; i >= 0; --i) {
    int ci = i < (int)c.size() ? ((c[i] % p_) + p_) % p_ : 0;
    a = a * p_ + ci;
  }
  return a;
}

}  // namespace linklab
