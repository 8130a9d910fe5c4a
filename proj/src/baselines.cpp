#include "soup/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace soup {

namespace {

// Least-squares coefficients of `signal` against the selected atoms. Uses a
// rank-revealing decomposition so a rank-deficient selection degrades to the
// minimum-norm solution instead of blowing up.
Eigen::VectorXcd refit(const DenseMatrix& dict, const CVector& signal,
                       const std::vector<std::size_t>& selected, bool& rank_deficient) {
  const auto n = static_cast<Eigen::Index>(dict.rows());
  const auto k = static_cast<Eigen::Index>(selected.size());
  Eigen::MatrixXcd sub(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto col = dict.col(selected[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < n; ++r) sub(r, c) = col[static_cast<std::size_t>(r)];
  }
  Eigen::Map<const Eigen::VectorXcd> rhs(signal.data(), n);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
  // Selections more collinear than this degrade to the minimum-norm solution.
  cod.setThreshold(1e-10);
  cod.compute(sub);
  if (cod.rank() < k) rank_deficient = true;
  return cod.solve(rhs);
}

}  // namespace

OmpResult omp_code(const DenseMatrix& dict, const CVector& signal, const OmpParams& params) {
  params.validate();
  if (dict.rows() != signal.size()) throw DimensionError("omp_code: signal length mismatch");
  const std::size_t num_atoms = dict.cols();

  OmpResult result;
  result.code = SparseColumn(num_atoms);

  CVector residual = signal;
  std::vector<std::size_t> selected;
  std::vector<bool> in_support(num_atoms, false);
  Eigen::VectorXcd coeffs;

  while (selected.size() < std::min(params.sparsity, num_atoms)) {
    if (norm2_sq(residual) <= params.err_tol) break;

    const CVector corr = hermitian_matvec(dict, residual);
    double best = -1.0;
    std::size_t best_idx = num_atoms;
    for (std::size_t j = 0; j < num_atoms; ++j) {
      if (in_support[j]) continue;
      const double mag = std::abs(corr[j]);
      if (mag > best) {
        best = mag;
        best_idx = j;
      }
    }
    if (best_idx == num_atoms || best == 0.0) break;

    selected.push_back(best_idx);
    in_support[best_idx] = true;

    coeffs = refit(dict, signal, selected, result.rank_deficient);

    residual = signal;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      const auto col = dict.col(selected[k]);
      const Complex c = coeffs(static_cast<Eigen::Index>(k));
      for (std::size_t r = 0; r < residual.size(); ++r) residual[r] -= col[r] * c;
    }
  }

  // SparseColumn wants increasing indices; the greedy order is arbitrary.
  std::vector<std::size_t> order(selected.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return selected[a] < selected[b]; });
  for (const std::size_t k : order) {
    result.code.push_back(selected[k], coeffs(static_cast<Eigen::Index>(k)));
  }
  return result;
}

CoefMatrix omp_code_all(const DenseMatrix& dict, const DenseMatrix& y, const OmpParams& params) {
  if (dict.rows() != y.rows()) throw DimensionError("omp_code_all: signal dimension mismatch");
  CoefMatrix coefs(y.cols(), dict.cols());
  // CoefMatrix rows are signals, columns are atoms; transpose the per-signal
  // codes into per-atom sparse columns.
  std::vector<std::vector<std::pair<std::size_t, Complex>>> by_atom(dict.cols());
  for (std::size_t i = 0; i < y.cols(); ++i) {
    const OmpResult r = omp_code(dict, y.col_vector(i), params);
    const auto& idx = r.code.support();
    const auto& val = r.code.values();
    // Codes enter the coefficient matrix conjugated (row i of C is x_i^H).
    for (std::size_t k = 0; k < idx.size(); ++k) by_atom[idx[k]].emplace_back(i, std::conj(val[k]));
  }
  for (std::size_t j = 0; j < dict.cols(); ++j) {
    SparseColumn col(y.cols());
    for (const auto& [i, v] : by_atom[j]) col.push_back(i, v);
    coefs.set_col(j, col);
  }
  return coefs;
}

}  // namespace soup
