#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "soup/metrics.hpp"
#include "soup/soup_learn.hpp"
#include "test_support.hpp"

using namespace soup;

namespace {

DenseMatrix rank_one(const CVector& atom, const CVector& code) {
  DenseMatrix y(atom.size(), code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    for (std::size_t r = 0; r < atom.size(); ++r) y(r, i) = atom[r] * std::conj(code[i]);
  }
  return y;
}

CVector basis_vector(std::size_t n, std::size_t k) {
  CVector v(n, Complex(0.0, 0.0));
  v[k] = Complex(1.0, 0.0);
  return v;
}

}  // namespace

TEST_CASE("odct dictionary has unit columns and the requested shape") {
  for (const auto& [n, j] : std::vector<std::pair<std::size_t, std::size_t>>{
           {64, 256}, {36, 144}, {64, 128}, {16, 32}, {4, 4}}) {
    const DenseMatrix d = odct_dictionary(n, j);
    CHECK(d.rows() == n);
    CHECK(d.cols() == j);
    for (std::size_t c = 0; c < j; ++c) {
      CHECK(std::abs(norm2(d.col_vector(c)) - 1.0) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(odct_dictionary(10, 20), ParameterError);  // 10 is not a square
}

TEST_CASE("atom_update normalizes, falls back, and flags degeneracy") {
  const CVector fallback = basis_vector(2, 0);

  const CVector kept = atom_update(CVector{Complex(3.0, 0.0), Complex(4.0, 0.0)}, false, fallback);
  CHECK(kept == fallback);

  const CVector normalized =
      atom_update(CVector{Complex(0.0, 0.0), Complex(5.0, 0.0)}, true, fallback);
  CHECK(std::abs(normalized[0]) == 0.0);
  CHECK(std::abs(normalized[1] - Complex(1.0, 0.0)) <= 1e-15);

  CHECK_THROWS_AS(atom_update(CVector(2, Complex(0.0, 0.0)), true, fallback), NumericError);
}

TEST_CASE("atom_update beats random unit probes at the alignment objective") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector direction = test::random_cvector(rng, 3);
    const CVector out = atom_update(direction, true, basis_vector(3, 0));
    const double achieved = inner(out, direction).real();
    for (int probe = 0; probe < 1000; ++probe) {
      const CVector d = test::random_unit(rng, 3);
      CHECK(inner(d, direction).real() <= achieved + 1e-9);
    }
  }
}

TEST_CASE("residual correlations with zero codes reduce to data correlations") {
  Rng rng(1);
  const DenseMatrix y = test::random_dense(rng, 4, 7);
  const DenseMatrix dict = test::random_unit_columns(rng, 4, 3);
  const CoefMatrix coefs(7, 3);
  const CVector b = residual_correlations(y, dict, coefs, 1);
  CHECK(test::max_abs_diff(b, hermitian_matvec(y, dict.col_vector(1))) <= 1e-14);
}

TEST_CASE("residual correlations cancel the atom's own rank-one term") {
  Rng rng(2);
  const CVector atom = test::random_unit(rng, 5);
  DenseMatrix dict(5, 1);
  dict.set_col(0, atom);
  const DenseMatrix y = test::random_dense(rng, 5, 6);
  CoefMatrix coefs(6, 1);
  coefs.set_col(0, test::random_sparse_column(rng, 6, 0.6));

  const CVector b = residual_correlations(y, dict, coefs, 0);
  const CVector expected = hermitian_matvec(y, atom);
  CHECK(test::max_abs_diff(b, expected) <= 1e-12);
}

TEST_CASE("residual correlations match the explicit residual on random instances") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4, big_n = 6, j = 3;
    const DenseMatrix y = test::random_dense(rng, n, big_n);
    const DenseMatrix dict = test::random_unit_columns(rng, n, j);
    const CoefMatrix coefs = test::random_coefs(rng, big_n, j, 0.5);
    const std::size_t pick = rng.below(j);

    const DenseMatrix residual = test::naive_residual_excluding(y, dict, coefs, pick);
    const CVector expected = test::naive_hermitian_matvec(residual, dict.col_vector(pick));
    const CVector got = residual_correlations(y, dict, coefs, pick);
    double scale = 0.0;
    for (const Complex& v : expected) scale = std::max(scale, std::abs(v));
    CHECK(test::max_abs_diff(got, expected) <= 1e-10 * (1.0 + scale));
  }
}

TEST_CASE("atom direction of an empty code is zero") {
  Rng rng(4);
  const DenseMatrix y = test::random_dense(rng, 4, 6);
  const DenseMatrix dict = test::random_unit_columns(rng, 4, 2);
  const CoefMatrix coefs = test::random_coefs(rng, 6, 2, 0.5);
  const CVector h = atom_direction(y, dict, coefs, 0, SparseColumn(6));
  for (const Complex& v : h) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("atom direction with zero codes and a one-hot code picks a signal") {
  Rng rng(5);
  const DenseMatrix y = test::random_dense(rng, 4, 6);
  const DenseMatrix dict = test::random_unit_columns(rng, 4, 2);
  const CoefMatrix coefs(6, 2);
  SparseColumn one_hot(6);
  one_hot.push_back(0, Complex(1.0, 0.0));
  const CVector h = atom_direction(y, dict, coefs, 0, one_hot);
  CHECK(test::max_abs_diff(h, y.col_vector(0)) <= 1e-14);
}

TEST_CASE("atom direction matches the explicit residual on random instances") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4, big_n = 6, j = 3;
    const DenseMatrix y = test::random_dense(rng, n, big_n);
    const DenseMatrix dict = test::random_unit_columns(rng, n, j);
    const CoefMatrix coefs = test::random_coefs(rng, big_n, j, 0.5);
    const SparseColumn c_new = test::random_sparse_column(rng, big_n, 0.5);
    const std::size_t pick = rng.below(j);

    const DenseMatrix residual = test::naive_residual_excluding(y, dict, coefs, pick);
    const CVector expected = test::naive_matvec(residual, c_new.to_dense());
    const CVector got = atom_direction(y, dict, coefs, pick, c_new);
    double scale = 0.0;
    for (const Complex& v : expected) scale = std::max(scale, std::abs(v));
    CHECK(test::max_abs_diff(got, expected) <= 1e-10 * (1.0 + scale));
  }
}

TEST_CASE("fit objective: zero codes, exact representation, random oracle") {
  Rng rng(7);
  const DenseMatrix y = test::random_dense(rng, 3, 5);
  const DenseMatrix dict = test::random_unit_columns(rng, 3, 2);

  const CoefMatrix zero(5, 2);
  const double y_sq = frobenius(y) * frobenius(y);
  CHECK(objective_l0(y, dict, zero, 0.7) ==
        doctest::Approx(y_sq + 0.49 * 0.0).epsilon(1e-12));
  CHECK(objective_l1(y, dict, zero, 0.7) == doctest::Approx(y_sq).epsilon(1e-12));

  // Y assembled exactly from the factors: zero fit at lambda = 0.
  CoefMatrix coefs = test::random_coefs(rng, 5, 2, 0.7);
  DenseMatrix exact(3, 5);
  for (std::size_t jj = 0; jj < 2; ++jj) {
    const CVector cj = coefs.col(jj).to_dense();
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t r = 0; r < 3; ++r) exact(r, i) += dict(r, jj) * std::conj(cj[i]);
    }
  }
  CHECK(objective_l0(exact, dict, coefs, 0.0) <= 1e-10 * frobenius(exact) * frobenius(exact));

  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix yy = test::random_dense(rng, 4, 6);
    const DenseMatrix dd = test::random_unit_columns(rng, 4, 3);
    const CoefMatrix cc = test::random_coefs(rng, 6, 3, 0.5);
    const double expected = test::naive_fit_frobenius_sq(yy, dd, cc);
    CHECK(fit_frobenius_sq(yy, dd, cc) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("soup_dillo recovers exactly representable rank-one data in one iteration") {
  Rng rng(8);
  const CVector atom = test::random_unit(rng, 5);
  CVector code(8);
  for (auto& v : code) v = rng.cgaussian() + 2.0 * phase_unit(rng.cgaussian());  // |v| >= 1
  const DenseMatrix y = rank_one(atom, code);

  LearnState init;
  init.dictionary = DenseMatrix(5, 1);
  init.dictionary.set_col(0, atom);
  init.coefs = CoefMatrix(8, 1);

  LearnConfig cfg;
  cfg.num_atoms = 1;
  cfg.penalty = L0CodeParams(0.5, 1e8);
  cfg.iterations = 1;

  const LearnState out = soup_dillo(y, init, cfg);
  CHECK(nsre(y, out.dictionary, out.coefs) <= 1e-10);
  CHECK(out.fit_frob_trace.back() <= 1e-10 * frobenius(y));
}

TEST_CASE("huge lambda shrinks everything to zero and parks atoms at the fallback") {
  Rng rng(9);
  const DenseMatrix y = test::random_dense(rng, 4, 6);
  double max_col_norm = 0.0;
  for (std::size_t i = 0; i < y.cols(); ++i) max_col_norm = std::max(max_col_norm, norm2(y.col_vector(i)));

  LearnConfig cfg;
  cfg.num_atoms = 3;
  cfg.penalty = L0CodeParams(max_col_norm * 2.0, max_col_norm * 1e6);
  cfg.iterations = 2;

  const LearnState out = soup_dillo(y, initial_learn_state(4, 3, 6), cfg);
  CHECK(out.coefs.nnz() == 0);
  const double y_sq = frobenius(y) * frobenius(y);
  CHECK(out.objective_trace.back() == doctest::Approx(y_sq).epsilon(1e-12));
  // Zero-code convention: the stored atom equals the fallback exactly.
  for (std::size_t j = 0; j < 3; ++j) {
    const CVector d = out.dictionary.col_vector(j);
    CHECK(d[0] == Complex(1.0, 0.0));
    for (std::size_t r = 1; r < 4; ++r) CHECK(d[r] == Complex(0.0, 0.0));
  }
}

TEST_CASE("huge mu gives the same full-shrinkage behavior for os_dl") {
  Rng rng(10);
  const DenseMatrix y = test::random_dense(rng, 4, 6);
  LearnConfig cfg;
  cfg.num_atoms = 3;
  cfg.penalty = L1CodeParams(1e6);
  cfg.iterations = 1;
  const LearnState out = os_dl(y, initial_learn_state(4, 3, 6), cfg);
  CHECK(out.coefs.nnz() == 0);
  CHECK(out.objective_trace.back() ==
        doctest::Approx(frobenius(y) * frobenius(y)).epsilon(1e-12));
}

TEST_CASE("penalty-free coding against a fixed orthonormal dictionary is least squares") {
  Rng rng(11);
  const std::size_t n = 4;
  const DenseMatrix y = test::random_dense(rng, n, 7);

  LearnState init;
  init.dictionary = DenseMatrix::identity(n);
  init.coefs = CoefMatrix(7, n);

  LearnConfig cfg;
  cfg.num_atoms = n;
  cfg.penalty = L1CodeParams(0.0);
  cfg.iterations = 1;
  cfg.update_atoms = false;

  const LearnState out = os_dl(y, init, cfg);
  for (std::size_t j = 0; j < n; ++j) {
    const CVector expected = hermitian_matvec(y, basis_vector(n, j));
    CHECK(test::max_abs_diff(out.coefs.col(j).to_dense(), expected) <= 1e-12);
  }
}

TEST_CASE("orthonormal dictionary with exact codes is a fixed point of os_dl") {
  Rng rng(12);
  const std::size_t n = 4;
  const DenseMatrix y = test::random_dense(rng, n, 7);
  const DenseMatrix eye = DenseMatrix::identity(n);

  LearnState init;
  init.dictionary = eye;
  init.coefs = CoefMatrix(7, n);
  for (std::size_t j = 0; j < n; ++j) {
    init.coefs.set_col(j, SparseColumn::from_dense(hermitian_matvec(y, eye.col_vector(j))));
  }

  LearnConfig cfg;
  cfg.num_atoms = n;
  cfg.penalty = L1CodeParams(0.0);
  cfg.iterations = 1;

  const LearnState out = os_dl(y, init, cfg);
  CHECK(frobenius_diff(out.dictionary, eye) <= 1e-10);
  CHECK(frobenius_diff(out.coefs, init.coefs) <= 1e-10);
}

TEST_CASE("objective descends after every inner step") {
  Rng rng(13);
  for (const bool l0 : {true, false}) {
    const DenseMatrix y = test::random_dense(rng, 4, 12);
    LearnConfig cfg;
    cfg.num_atoms = 4;
    if (l0) {
      cfg.penalty = L0CodeParams(0.4, 1e8);
    } else {
      cfg.penalty = L1CodeParams(0.5);
    }
    cfg.iterations = 6;
    cfg.record_inner_objectives = true;

    const LearnState out = l0 ? soup_dillo(y, initial_learn_state(4, 4, 12), cfg)
                              : os_dl(y, initial_learn_state(4, 4, 12), cfg);

    REQUIRE(!out.inner_objective_trace.empty());
    double prev = out.objective_trace.front();
    for (const double v : out.inner_objective_trace) {
      CHECK(v <= prev + 1e-9 * (1.0 + std::abs(prev)));
      prev = v;
    }
  }
}

TEST_CASE("learning keeps atoms unit-norm and the objective monotone") {
  Rng rng(14);
  for (int run = 0; run < 3; ++run) {
    const DenseMatrix y = test::random_dense(rng, 9, 20);
    LearnConfig cfg;
    cfg.num_atoms = 6;
    cfg.penalty = L0CodeParams(0.5, 1e8);
    cfg.iterations = 10;
    cfg.atom_order = run == 2 ? AtomOrder::kSeededRandom : AtomOrder::kCyclic;
    cfg.order_seed = 99;

    const LearnState out = soup_dillo(y, initial_learn_state(9, 6, 20), cfg);
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(std::abs(norm2(out.dictionary.col_vector(j)) - 1.0) <= 1e-10);
    }
    for (std::size_t t = 1; t < out.objective_trace.size(); ++t) {
      CHECK(out.objective_trace[t] <= out.objective_trace[t - 1]);
    }
    const FeasibilityFlags flags = check_feasibility(out.dictionary, out.coefs, 1e8);
    CHECK(flags.ok());
  }
}

TEST_CASE("feasibility flags report violations instead of infinities") {
  Rng rng(17);
  DenseMatrix dict = test::random_unit_columns(rng, 4, 3);
  CoefMatrix coefs(5, 3);
  SparseColumn big(5);
  big.push_back(2, Complex(7.0, 0.0));
  coefs.set_col(0, big);

  CHECK_FALSE(check_feasibility(dict, coefs, 1.0).coefs_bounded);
  CHECK(check_feasibility(dict, coefs, 10.0).coefs_bounded);

  dict(0, 1) += 0.5;  // break the unit norm
  CHECK_FALSE(check_feasibility(dict, coefs, 10.0).atoms_unit_norm);
}

TEST_CASE("iterate differences shrink on fixed data") {
  Rng rng(15);
  const DenseMatrix y = test::random_dense(rng, 9, 24);
  LearnConfig cfg;
  cfg.num_atoms = 6;
  cfg.penalty = L0CodeParams(1.2, 1e8);
  cfg.iterations = 200;

  const LearnState out = soup_dillo(y, initial_learn_state(9, 6, 24), cfg);
  CHECK(out.coefs.nnz() > 0);  // the regime is non-trivial
  const double d0 = out.dict_diff_trace.front();
  const double c0 = out.coef_diff_trace.front();
  CHECK(out.dict_diff_trace.back() <= 1e-4 * (d0 > 0.0 ? d0 : 1.0));
  CHECK(out.coef_diff_trace.back() <= 1e-4 * (c0 > 0.0 ? c0 : 1.0));
}

TEST_CASE("ties between keeping and dropping a coefficient are counted") {
  // With d = e1 the correlations equal the planted code exactly, so placing
  // an entry at magnitude lambda produces a reproducible tie.
  const std::size_t n = 3;
  const double lambda = 0.75;
  CVector code{Complex(lambda, 0.0), Complex(2.0, 0.0)};
  const DenseMatrix y = rank_one(basis_vector(n, 0), code);

  LearnState init;
  init.dictionary = DenseMatrix(n, 1);
  init.dictionary.set_col(0, basis_vector(n, 0));
  init.coefs = CoefMatrix(2, 1);

  LearnConfig cfg;
  cfg.num_atoms = 1;
  cfg.penalty = L0CodeParams(lambda, 1e8);
  cfg.iterations = 1;

  const LearnState out = soup_dillo(y, init, cfg);
  CHECK(out.nonunique_code_events == 1);
  CHECK(out.coefs.nnz() == 2);  // the tie-break keeps the boundary entry
}

TEST_CASE("learning rejects invalid inputs") {
  Rng rng(16);
  const DenseMatrix y = test::random_dense(rng, 4, 5);
  LearnConfig cfg;
  cfg.num_atoms = 2;
  cfg.penalty = L0CodeParams(0.5, 1e8);
  cfg.iterations = 1;

  // Non-unit initial atom.
  LearnState bad = initial_learn_state(4, 2, 5);
  bad.dictionary(0, 0) *= 2.0;
  CHECK_THROWS_AS(soup_dillo(y, bad, cfg), ParameterError);

  // Wrong penalty kind for the entry point.
  CHECK_THROWS_AS(os_dl(y, initial_learn_state(4, 2, 5), cfg), ParameterError);

  // Mismatched coefficient shape.
  LearnState wrong = initial_learn_state(4, 2, 5);
  wrong.coefs = CoefMatrix(6, 2);
  CHECK_THROWS_AS(soup_dillo(y, wrong, cfg), DimensionError);

  // Empty data.
  CHECK_THROWS_AS(soup_dillo(DenseMatrix(0, 0), initial_learn_state(4, 2, 5), cfg),
                  ParameterError);

  // Initial coefficients above the cap.
  LearnConfig tight = cfg;
  tight.penalty = L0CodeParams(0.5, 1.0);
  LearnState over = initial_learn_state(4, 2, 5);
  SparseColumn big(5);
  big.push_back(0, Complex(3.0, 0.0));
  over.coefs.set_col(0, big);
  CHECK_THROWS_AS(soup_dillo(y, over, tight), ParameterError);
}
