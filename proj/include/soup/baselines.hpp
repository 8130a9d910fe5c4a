#pragma once

#include "soup/coef_matrix.hpp"
#include "soup/dense_matrix.hpp"

namespace soup {

struct OmpParams {
  std::size_t sparsity = 1;    // atoms selected per signal
  double err_tol = 1e-6;       // squared-residual stopping threshold

  void validate() const {
    if (sparsity == 0) throw ParameterError("OmpParams: sparsity must be >= 1");
    if (err_tol < 0.0) throw ParameterError("OmpParams: err_tol must be >= 0");
  }
};

struct OmpResult {
  SparseColumn code;  // length = atom count
  // True when a least-squares refit hit a rank-deficient subdictionary and
  // fell back to the minimum-norm solution.
  bool rank_deficient = false;
};

// Greedy column-wise sparse coding: pick the atom with the largest
// |<residual, d_j>| (ties broken by lowest index), least-squares refit on the
// selected support, stop at `sparsity` atoms or squared residual <= err_tol.
// Atoms must have unit norm.
OmpResult omp_code(const DenseMatrix& dict, const CVector& signal, const OmpParams& params);

// omp_code applied to every column of Y independently.
CoefMatrix omp_code_all(const DenseMatrix& dict, const DenseMatrix& y, const OmpParams& params);

}  // namespace soup
