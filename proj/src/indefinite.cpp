#include "linklab/indefinite.hpp"

#include <json.hpp>

#include "linklab/dense.hpp"

namespace linklab {

std::string scalar_field_name(ScalarField f) {
  switch (f) {
    case ScalarField::R: return "r";
    case ScalarField::C: return "c";
    case ScalarField::H: return "h";
  }
  return "r";
}

ScalarField scalar_field_from_name(const std::string& s) {
  if (s == "r") return ScalarField::R;
  if (s == "c") return ScalarField::C;
  if (s == "h") return ScalarField::H;
  fail(errc::malformed_input, "unknown scalar field '" + s + "'");
}

namespace {

template <typename K>
TrialReport run_trials(ScalarField tag, int q_iso, int p, int n3, int trials, uint64_t seed) {
  const auto form = standard_form<K>(q_iso, p, n3);
  std::mt19937_64 rng(seed);
  TrialReport r;
  r.field = tag;
  r.q = q_iso;
  r.p = p;
  r.n3 = n3;
  r.trials = trials;
  r.seed = seed;

  for (int t = 0; t < trials; ++t) {
    const auto g1 = random_parabolic<K>(form, rng);
    const auto g2 = random_parabolic<K>(form, rng);

    r.form_residual = std::max(r.form_residual, preserves_form(g1.g, form));
    r.form_residual = std::max(r.form_residual, preserves_form(g2.g, form));

    const auto [n1d, l1] = parabolic_decompose(form, g1);
    r.decompose_residual = std::max(r.decompose_residual, (n1d.g * l1.g - g1.g).max_abs());

    // The projection g -> diag(M, (M*)^{-1}, R) is multiplicative.
    const auto prod = g1.g * g2.g;
    const auto prod_levi = levi_element(form, g1.M * g2.M, g1.R * g2.R).g;
    KMat<K> levi_of_prod(form.dim(), form.dim());
    levi_of_prod.set_block(0, 0, prod.block(0, 0, q_iso, q_iso));
    levi_of_prod.set_block(q_iso, q_iso, prod.block(q_iso, q_iso, q_iso, q_iso));
    levi_of_prod.set_block(2 * q_iso, 2 * q_iso, prod.block(2 * q_iso, 2 * q_iso, n3, n3));
    r.projection_residual = std::max(r.projection_residual, (levi_of_prod - prod_levi).max_abs());

    r.closure_residual = std::max(r.closure_residual, preserves_form(prod, form));
    r.closure_residual = std::max(r.closure_residual, preserves_form(g1.g.inverted(), form));

    const auto m1 = random_nil<K>(form, rng);
    const auto m2 = random_nil<K>(form, rng);
    const auto m3 = random_nil<K>(form, rng);
    const auto m4 = random_nil<K>(form, rng);
    const auto c1 = nil_commutator(form, m1, m2);
    const auto c2 = nil_commutator(form, m3, m4);
    r.commutator_b_residual = std::max(r.commutator_b_residual, c1.B.max_abs());
    const auto cc = nil_commutator(form, c1, c2);
    r.double_commutator =
        std::max(r.double_commutator, (cc.g - KMat<K>::identity(form.dim())).max_abs());

    const auto prod12 = nil_multiply(form, m1, m2);
    r.homomorphism_b_residual =
        std::max(r.homomorphism_b_residual, (prod12.B - (m1.B + m2.B)).max_abs());

    // Norm preservation under conjugation by the compact Levi part.
    const auto mc = random_unitary<K>(q_iso, rng);
    const auto rc = random_compact_r<K>(form, rng);
    const auto conj = conjugate_by_levi(form, m1, mc, rc);
    r.levi_norm_residual =
        std::max(r.levi_norm_residual, std::abs(conj.Y.frobenius() - m1.Y.frobenius()));
    r.levi_norm_residual =
        std::max(r.levi_norm_residual, std::abs(conj.B.frobenius() - m1.B.frobenius()));
  }
  return r;
}

// Real representation of one scalar as a block: 1x1 for R, 2x2 for C, 4x4
// left-multiplication matrix for H. Conjugate-transpose maps to transpose, so
// Hermitian matrices realify to symmetric ones.
void realify_into(DenseMatrix& out, int i0, int j0, ScalarField field, double re, double im, double jm, double km) {
  switch (field) {
    case ScalarField::R:
      out(i0, j0) = re;
      break;
    case ScalarField::C:
      out(i0, j0) = re;
      out(i0, j0 + 1) = -im;
      out(i0 + 1, j0) = im;
      out(i0 + 1, j0 + 1) = re;
      break;
    case ScalarField::H: {
      const double m[4][4] = {{re, -im, -jm, -km}, {im, re, -km, jm}, {jm, km, re, -im}, {km, -jm, im, re}};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i0 + i, j0 + j) = m[i][j];
      break;
    }
  }
}

}  // namespace

TrialReport parabolic_trials(ScalarField field, int q_iso, int p, int n3, int trials, uint64_t seed) {
  switch (field) {
    case ScalarField::R: return run_trials<double>(field, q_iso, p, n3, trials, seed);
    case ScalarField::C: return run_trials<std::complex<double>>(field, q_iso, p, n3, trials, seed);
    case ScalarField::H: return run_trials<Quaternion>(field, q_iso, p, n3, trials, seed);
  }
  fail(errc::malformed_input, "unknown scalar field");
}

std::pair<int, int> form_signature(ScalarField field, int q_iso, int p, int n3) {
  const auto form = standard_form<Quaternion>(q_iso, p, n3);  // entries are just 0/±1
  const int n = form.dim();
  const int s = field == ScalarField::R ? 1 : field == ScalarField::C ? 2 : 4;
  DenseMatrix real(n * s, n * s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Quaternion v = form.Q(i, j);
      realify_into(real, i * s, j * s, field, v.w, v.x, v.y, v.z);
    }
  const auto ed = eigh(real);
  int pos = 0, neg = 0;
  for (double v : ed.values) {
    if (v > 1e-9) ++pos;
    if (v < -1e-9) ++neg;
  }
  return {pos / s, neg / s};
}

std::string trial_report_to_json(const TrialReport& r) {
  nlohmann::ordered_json j;
  j["field"] = scalar_field_name(r.field);
  j["q"] = r.q;
  j["p"] = r.p;
  j["n3"] = r.n3;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["max_residuals"] = {{"form", r.form_residual},
                        {"decompose", r.decompose_residual},
                        {"projection", r.projection_residual},
                        {"closure", r.closure_residual},
                        {"commutator_b", r.commutator_b_residual},
                        {"double_commutator", r.double_commutator},
                        {"levi_norm", r.levi_norm_residual},
                        {"homomorphism_b", r.homomorphism_b_residual}};
  return j.dump(2) + "\n";
}

}  // namespace linklab
