#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "soup/coef_matrix.hpp"
#include "soup/dense_matrix.hpp"
#include "soup/thresholding.hpp"

namespace soup {

enum class AtomOrder { kCyclic, kSeededRandom };

struct LearnConfig {
  std::size_t num_atoms = 0;
  std::variant<L0CodeParams, L1CodeParams> penalty;
  std::size_t iterations = 1;
  AtomOrder atom_order = AtomOrder::kCyclic;
  std::uint64_t order_seed = 0;
  // Replacement for atoms whose code goes to zero; empty means the first
  // standard basis vector. Must have unit l2 norm.
  CVector fallback_atom;
  // When false only the sparse coding steps run (coding against a fixed
  // dictionary, e.g. 60 coordinate-descent sweeps over the c_j).
  bool update_atoms = true;
  // Records the objective after every inner sparse-coding and atom-update
  // step; costs an extra objective evaluation per step, so tests only.
  bool record_inner_objectives = false;

  void validate(std::size_t signal_dim) const;
};

struct LearnState {
  DenseMatrix dictionary;  // n x J, unit-norm columns
  CoefMatrix coefs;        // N x J

  // Entry 0 describes the initial state; one more entry per iteration.
  std::vector<double> objective_trace;
  std::vector<double> fit_frob_trace;  // ||Y - D C^H||_F
  std::vector<std::size_t> nnz_trace;

  // One entry per iteration: Frobenius distance to the previous iterate.
  std::vector<double> dict_diff_trace;
  std::vector<double> coef_diff_trace;

  std::vector<double> inner_objective_trace;  // only with record_inner_objectives

  // Number of sparse-coding steps whose minimizer was not unique (some
  // correlation magnitude hit lambda exactly).
  std::size_t nonunique_code_events = 0;
};

// Overcomplete DCT dictionary: Kronecker product of 1-D overcomplete DCT
// bases, truncated to num_atoms columns, each column normalized. signal_dim
// must be a perfect square.
DenseMatrix odct_dictionary(std::size_t signal_dim, std::size_t num_atoms);

// Zero codes plus the overcomplete DCT (the usual starting point).
LearnState initial_learn_state(std::size_t signal_dim, std::size_t num_atoms,
                               std::size_t signal_count);

// Correlation of every signal's current residual (excluding atom j's own
// rank-one term) with atom j:  Y^H d_j - C D^H d_j + c_j, the vector the
// thresholding step is applied to. Column j of (D, C) must hold the previous
// iterates. Never forms the n x N residual matrix.
CVector residual_correlations(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                              std::size_t j);

// Unnormalized updated atom  Y c_new - D C^H c_new + d_j (c_j^H c_new),
// equal to the residual-excluding-j matrix applied to c_new. Column j of
// (D, C) must still hold the previous iterates.
CVector atom_direction(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                       std::size_t j, const SparseColumn& c_new);

// Normalizes `direction` when the paired code is nonzero, otherwise returns
// `fallback`. A zero direction with a nonzero code violates the algorithm's
// invariants and raises NumericError.
CVector atom_update(const CVector& direction, bool code_nonzero, const CVector& fallback);

// The signal approximations D C^H as a dense n x N matrix, assembled by
// scattering each sparse code column.
DenseMatrix approx_signals(const DenseMatrix& dict, const CoefMatrix& coefs);

// ||Y - D C^H||_F^2 via the assembled residual. This avoids the cancellation
// a ||Y||^2 - 2 Re<...> + ... style expansion suffers when the residual is
// small, which matters because trace monotonicity is checked at tight
// tolerances.
double fit_frobenius_sq(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs);

double objective_l0(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                    double lambda);
double objective_l1(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                    double mu);

// The constraint set is maintained by construction; these flags stand in for
// the barrier terms of the unconstrained objective.
struct FeasibilityFlags {
  bool atoms_unit_norm = false;
  bool coefs_bounded = false;  // l-inf cap; trivially true for the l1 problem
  bool ok() const { return atoms_unit_norm && coefs_bounded; }
};

FeasibilityFlags check_feasibility(const DenseMatrix& dict, const CoefMatrix& coefs, double cap,
                                   double norm_tol = 1e-10);

// Block coordinate descent for the l0-penalized problem: for each atom in
// order, exact sparse-code update then exact atom update.
LearnState soup_dillo(const DenseMatrix& y, LearnState init, const LearnConfig& cfg);

// Same loop for the l1-penalized problem.
LearnState os_dl(const DenseMatrix& y, LearnState init, const LearnConfig& cfg);

}  // namespace soup
