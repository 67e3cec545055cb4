#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "linklab/indefinite.hpp"

using namespace linklab;

namespace {

template <typename K>
KMat<K> from_rows(int rows, int cols, std::initializer_list<double> vals) {
  KMat<K> m(rows, cols);
  auto it = vals.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = K(*it++);
  return m;
}

}  // namespace

TEST_CASE("standard forms") {
  const auto f111 = standard_form<double>(1, 1, 1);
  CHECK(f111.dim() == 3);
  CHECK(f111.Q(0, 1) == 1.0);
  CHECK(f111.Q(1, 0) == 1.0);
  CHECK(f111.Q(2, 2) == 1.0);  // J = Id when p = q
  CHECK(f111.Q(0, 0) == 0.0);

  const auto f122 = standard_form<double>(1, 2, 2);
  CHECK(f122.Jmat()(0, 0) == -1.0);
  CHECK(f122.Jmat()(1, 1) == 1.0);

  CHECK_THROWS_AS(standard_form<double>(2, 1, 4), Error);
  CHECK_THROWS_AS(standard_form<double>(1, 3, 1), Error);

  // Adjoint symmetry of Q in all three scalar algebras.
  const auto fc = standard_form<std::complex<double>>(2, 3, 5);
  CHECK((fc.Q.adjoint() - fc.Q).max_abs() == 0.0);
  const auto fh = standard_form<Quaternion>(2, 3, 5);
  CHECK((fh.Q.adjoint() - fh.Q).max_abs() == 0.0);
}

TEST_CASE("signature by realified eigensolve") {
  const auto sig = form_signature(ScalarField::C, 2, 2, 3);
  CHECK(sig.first == 5);
  CHECK(sig.second == 2);
  const auto sig_r = form_signature(ScalarField::R, 1, 2, 2);
  CHECK(sig_r.first == 2);  // one hyperbolic +1 and one J +1
  CHECK(sig_r.second == 2);
  const auto sig_h = form_signature(ScalarField::H, 2, 4, 12);
  CHECK(sig_h.first == 2 + 12 - 2);
  CHECK(sig_h.second == 4);
}

TEST_CASE("form preservation spot checks") {
  const auto f = standard_form<double>(1, 1, 1);
  CHECK(preserves_form(KMat<double>::identity(3), f) == 0.0);

  // Swapping the hyperbolic pair preserves the form.
  auto swap = KMat<double>(3, 3);
  swap(0, 1) = swap(1, 0) = swap(2, 2) = 1.0;
  CHECK(preserves_form(swap, f) == 0.0);

  // diag(2, 1/2, 1): M = 2 forces L = 1/2.
  auto diag = from_rows<double>(3, 3, {2, 0, 0, 0, 0.5, 0, 0, 0, 1});
  CHECK(preserves_form(diag, f) == 0.0);
}

TEST_CASE("make_parabolic assembles valid elements and rejects bad ones") {
  const auto f = standard_form<double>(1, 2, 3);

  const auto id = make_parabolic(f, KMat<double>::identity(1), KMat<double>(1, 1), KMat<double>(3, 1),
                                 KMat<double>::identity(3));
  CHECK((id.g - KMat<double>::identity(f.dim())).max_abs() == 0.0);

  // Nil element from arbitrary B with Y = -B* J B / 2.
  std::mt19937_64 rng(5);
  const auto b = random_kmat<double>(3, 1, rng);
  KMat<double> y(1, 1);
  const auto sym = b.adjoint() * f.Jmat() * b;
  y(0, 0) = -0.5 * sym(0, 0);
  const auto nil = make_nil(f, y, b);
  CHECK(preserves_form(nil.g, f) < 1e-12);

  // Violated symmetric-part condition reports the residual.
  KMat<double> bad_y(1, 1);
  bad_y(0, 0) = y(0, 0) + 0.5;
  CHECK_THROWS_WITH_AS(make_nil(f, bad_y, b), doctest::Contains("ConstraintViolated"), Error);

  // R that fails R* J R = J is rejected.
  auto bad_r = KMat<double>::identity(3);
  bad_r(0, 0) = 2.0;
  CHECK_THROWS_WITH_AS(
      make_parabolic(f, KMat<double>::identity(1), KMat<double>(1, 1), KMat<double>(3, 1), bad_r),
      doctest::Contains("ConstraintViolated"), Error);
}

TEST_CASE("decomposition: levi-only and nil-only inputs") {
  const auto f = standard_form<double>(2, 3, 4);
  std::mt19937_64 rng(9);

  const auto m = random_conditioned_gl<double>(2, rng);
  const auto r = random_indefinite_r<double>(f, rng);
  const auto levi_in = make_parabolic(f, m, KMat<double>(2, 2), KMat<double>(4, 2), r, 1e-8);
  const auto [nil_part, levi_part] = parabolic_decompose(f, levi_in);
  CHECK((nil_part.g - KMat<double>::identity(f.dim())).max_abs() < 1e-12);
  CHECK((nil_part.g * levi_part.g - levi_in.g).max_abs() < 1e-12);

  const auto n = random_nil<double>(f, rng);
  const auto [nil2, levi2] = parabolic_decompose(f, n);
  CHECK((levi2.g - KMat<double>::identity(f.dim())).max_abs() == 0.0);
  CHECK((nil2.g - n.g).max_abs() < 1e-12);
}

TEST_CASE("nil commutators stay in the kernel and the B map is additive") {
  const auto f = standard_form<std::complex<double>>(2, 3, 5);
  std::mt19937_64 rng(31);
  const auto a = random_nil<std::complex<double>>(f, rng);
  const auto b = random_nil<std::complex<double>>(f, rng);

  // a = b gives the identity.
  const auto self = nil_commutator(f, a, a);
  CHECK((self.g - KMat<std::complex<double>>::identity(f.dim())).max_abs() < 1e-13);

  const auto comm = nil_commutator(f, a, b);
  CHECK(comm.B.max_abs() < 1e-13);
  // Y block of a commutator is skew-hermitian.
  CHECK((comm.Y + comm.Y.adjoint()).max_abs() < 1e-13);

  // Two B = 0 elements commute.
  const auto s1 = random_kmat<std::complex<double>>(2, 2, rng);
  const auto s2 = random_kmat<std::complex<double>>(2, 2, rng);
  const auto z1 = make_nil(f, (s1 - s1.adjoint()).block(0, 0, 2, 2), KMat<std::complex<double>>(5, 2));
  const auto z2 = make_nil(f, (s2 - s2.adjoint()).block(0, 0, 2, 2), KMat<std::complex<double>>(5, 2));
  const auto z_comm = nil_commutator(f, z1, z2);
  CHECK((z_comm.g - KMat<std::complex<double>>::identity(f.dim())).max_abs() < 1e-13);

  CHECK((nil_multiply(f, a, b).B - (a.B + b.B)).max_abs() < 1e-13);
}

TEST_CASE("levi conjugation transforms the blocks as computed") {
  const auto f = standard_form<double>(2, 3, 5);
  std::mt19937_64 rng(41);
  const auto n = random_nil<double>(f, rng);
  const auto m = random_conditioned_gl<double>(2, rng);
  const auto r = random_indefinite_r<double>(f, rng);

  const auto conj = conjugate_by_levi(f, n, m, r, 1e-8);
  // Independent route: multiply the assembled matrices.
  const auto levi = levi_element(f, m, r);
  const auto direct = levi.g * n.g * levi.g.inverted();
  CHECK((conj.g - direct).max_abs() < 1e-10);
  CHECK((conj.Y - m * n.Y * m.adjoint()).max_abs() < 1e-12);
  CHECK((conj.B - r * n.B * m.adjoint()).max_abs() < 1e-12);

  // Identity conjugation is the identity.
  const auto same = conjugate_by_levi(f, n, KMat<double>::identity(2), KMat<double>::identity(5));
  CHECK((same.g - n.g).max_abs() == 0.0);

  // Compact factors preserve the Frobenius norms.
  const auto mc = random_unitary<double>(2, rng);
  const auto rc = random_compact_r<double>(f, rng);
  const auto iso = conjugate_by_levi(f, n, mc, rc);
  CHECK(iso.Y.frobenius() == doctest::Approx(n.Y.frobenius()).epsilon(1e-12));
  CHECK(iso.B.frobenius() == doctest::Approx(n.B.frobenius()).epsilon(1e-12));

  // Rotation with B = 0: only the Y norm matters.
  const auto s = random_kmat<double>(2, 2, rng);
  const auto z = make_nil(f, (s - s.adjoint()).block(0, 0, 2, 2), KMat<double>(5, 2));
  const auto zc = conjugate_by_levi(f, z, mc, KMat<double>::identity(5));
  CHECK(zc.Y.frobenius() == doctest::Approx(z.Y.frobenius()).epsilon(1e-12));

  // J-breaking R is rejected.
  auto bad_r = KMat<double>::identity(5);
  bad_r(0, 0) = 0.0;
  bad_r(0, 1) = 1.0;
  bad_r(1, 0) = 1.0;
  bad_r(1, 1) = 0.0;  // swaps a J-negative and a J-positive direction
  CHECK_THROWS_WITH_AS(conjugate_by_levi(f, n, m, bad_r), doctest::Contains("ConstraintViolated"), Error);
}

TEST_CASE("isotropic subspaces of the standard form") {
  const auto f = standard_form<double>(2, 3, 5);
  const int n = f.dim();

  KMat<double> span_e(n, 2);
  span_e(0, 0) = 1.0;
  span_e(1, 1) = 1.0;
  CHECK(isotropic_check(span_e, f));

  KMat<double> dual(n, 1);
  dual(2, 0) = 1.0;  // e_{q+1}
  CHECK(isotropic_check(dual, f));

  KMat<double> mixed(n, 2);
  mixed(0, 0) = 1.0;
  mixed(2, 1) = 1.0;  // <e1, f1> = 1
  CHECK(!isotropic_check(mixed, f));

  KMat<double> positive(n, 1);
  positive(n - 1, 0) = 1.0;
  CHECK(!isotropic_check(positive, f));

  KMat<double> dependent(n, 2);
  dependent(0, 0) = 1.0;
  dependent(0, 1) = 2.0;
  CHECK_THROWS_WITH_AS(isotropic_check(dependent, f), doctest::Contains("RankDeficient"), Error);
}

TEST_CASE("quaternionic elements satisfy the same identities") {
  const auto f = standard_form<Quaternion>(2, 3, 5);
  std::mt19937_64 rng(53);
  for (int t = 0; t < 10; ++t) {
    const auto g1 = random_parabolic<Quaternion>(f, rng);
    const auto g2 = random_parabolic<Quaternion>(f, rng);
    CHECK(preserves_form(g1.g, f) < 1e-10);
    CHECK(preserves_form(g1.g * g2.g, f) < 1e-9);
    CHECK(preserves_form(g1.g.inverted(), f) < 1e-9);
    const auto [nil, levi] = parabolic_decompose(f, g1);
    CHECK((nil.g * levi.g - g1.g).max_abs() < 1e-10);
  }
}

TEST_CASE("seeded trial batches stay within tolerance") {
  for (auto field : {ScalarField::R, ScalarField::C, ScalarField::H}) {
    const auto r = parabolic_trials(field, 2, 3, 8, 25, 12345);
    CHECK(r.form_residual <= 1e-10);
    CHECK(r.decompose_residual <= 1e-10);
    CHECK(r.projection_residual <= 1e-9);
    CHECK(r.closure_residual <= 1e-9);
    CHECK(r.commutator_b_residual <= 1e-10);
    CHECK(r.double_commutator <= 1e-12);
    CHECK(r.levi_norm_residual <= 1e-10);
    CHECK(r.homomorphism_b_residual <= 1e-10);
  }
  // Determinism per seed.
  const auto a = parabolic_trials(ScalarField::C, 1, 2, 6, 10, 7);
  const auto b = parabolic_trials(ScalarField::C, 1, 2, 6, 10, 7);
  CHECK(trial_report_to_json(a) == trial_report_to_json(b));
}
