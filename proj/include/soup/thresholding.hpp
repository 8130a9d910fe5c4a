#pragma once

#include "soup/complex_ops.hpp"
#include "soup/errors.hpp"
#include "soup/sparse_column.hpp"

namespace soup {

// Weights of the l0-penalized coding subproblem: the penalty enters the
// objective as lambda^2 per nonzero, and every coefficient magnitude is
// capped at `cap`. The closed-form solution below requires cap > lambda.
struct L0CodeParams {
  double lambda = 0.0;
  double cap = 1e8;

  L0CodeParams() = default;
  L0CodeParams(double lambda_in, double cap_in) : lambda(lambda_in), cap(cap_in) { validate(); }
  void validate() const {
    if (lambda < 0.0) throw ParameterError("L0CodeParams: lambda must be >= 0");
    if (!(cap > lambda)) throw ParameterError("L0CodeParams: cap must exceed lambda");
  }
};

struct L1CodeParams {
  double mu = 0.0;

  L1CodeParams() = default;
  explicit L1CodeParams(double mu_in) : mu(mu_in) { validate(); }
  void validate() const {
    if (mu < 0.0) throw ParameterError("L1CodeParams: mu must be >= 0");
  }
};

// Entrywise: 0 where |b_i| < lambda, b_i otherwise. Magnitudes exactly equal
// to lambda are kept; the comparison is on magnitudes, not squares.
CVector hard_threshold(const CVector& b, double lambda);

struct L0CodeResult {
  SparseColumn code;
  // False when some |b_i| equals lambda exactly, i.e. the minimizer of the
  // coding subproblem is not unique and the kept-entry tie-break was applied.
  bool unique = true;
};

// Per-entry global minimizer of |c - b_i|^2 + lambda^2 [c != 0] subject to
// |c| <= cap: hard-threshold at lambda, clip the magnitude at cap, keep the
// phase of b_i.
L0CodeResult sparse_code_l0(const CVector& b, const L0CodeParams& params);

// Per-entry minimizer of |c - b_i|^2 + mu |c|: magnitude soft-thresholding
// by mu/2 with the phase of b_i.
SparseColumn sparse_code_l1(const CVector& b, const L1CodeParams& params);

}  // namespace soup
