#include "soup/soup_learn.hpp"

#include <cmath>
#include <numeric>

#include "soup/rng.hpp"

namespace soup {

void LearnConfig::validate(std::size_t signal_dim) const {
  if (num_atoms == 0) throw ParameterError("LearnConfig: num_atoms must be >= 1");
  if (iterations == 0) throw ParameterError("LearnConfig: iterations must be >= 1");
  if (!fallback_atom.empty()) {
    if (fallback_atom.size() != signal_dim)
      throw DimensionError("LearnConfig: fallback_atom has wrong length");
    if (std::abs(norm2(fallback_atom) - 1.0) > 1e-12)
      throw ParameterError("LearnConfig: fallback_atom must have unit l2 norm");
  }
  std::visit([](const auto& p) { p.validate(); }, penalty);
}

DenseMatrix odct_dictionary(std::size_t signal_dim, std::size_t num_atoms) {
  if (signal_dim == 0 || num_atoms == 0) throw ParameterError("odct_dictionary: empty shape");
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(signal_dim))));
  if (side * side != signal_dim)
    throw ParameterError("odct_dictionary: signal_dim must be a perfect square");
  const auto base_cols =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_atoms))));
  if (base_cols * base_cols < num_atoms)
    throw ParameterError("odct_dictionary: internal grid too small");

  // 1-D overcomplete DCT: cosines at base_cols frequencies, mean removed from
  // the non-DC columns.
  DenseMatrix base(side, base_cols);
  for (std::size_t k = 0; k < base_cols; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < side; ++i) {
      const double v = std::cos(M_PI * static_cast<double>(i * k) / static_cast<double>(base_cols));
      base(i, k) = v;
      mean += v;
    }
    if (k > 0) {
      mean /= static_cast<double>(side);
      for (std::size_t i = 0; i < side; ++i) base(i, k) -= mean;
    }
  }

  DenseMatrix dict(signal_dim, num_atoms);
  for (std::size_t j = 0; j < num_atoms; ++j) {
    const std::size_t k1 = j / base_cols;
    const std::size_t k2 = j % base_cols;
    auto col = dict.col(j);
    double norm_sq = 0.0;
    for (std::size_t i1 = 0; i1 < side; ++i1) {
      for (std::size_t i2 = 0; i2 < side; ++i2) {
        const double v = base(i1, k1).real() * base(i2, k2).real();
        col[i1 * side + i2] = v;
        norm_sq += v * v;
      }
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < signal_dim; ++i) col[i] *= inv;
  }
  return dict;
}

LearnState initial_learn_state(std::size_t signal_dim, std::size_t num_atoms,
                               std::size_t signal_count) {
  if (signal_count == 0) throw ParameterError("initial_learn_state: no signals");
  LearnState s;
  s.dictionary = odct_dictionary(signal_dim, num_atoms);
  s.coefs = CoefMatrix(signal_count, num_atoms);
  return s;
}

CVector residual_correlations(const DenseMatrix& y, const DenseMatrix& dict,
                              const CoefMatrix& coefs, std::size_t j) {
  if (dict.rows() != y.rows()) throw DimensionError("residual_correlations: signal dim mismatch");
  if (coefs.signal_count() != y.cols() || coefs.atom_count() != dict.cols())
    throw DimensionError("residual_correlations: coefficient shape mismatch");
  if (j >= dict.cols()) throw DimensionError("residual_correlations: atom index out of range");

  const CVector atom = dict.col_vector(j);
  CVector b = hermitian_matvec(y, atom);             // Y^H d_j
  const CVector w = hermitian_matvec(dict, atom);    // D^H d_j
  for (std::size_t k = 0; k < coefs.atom_count(); ++k) {
    sparse_axpy(-w[k], coefs.col(k), b);
  }
  sparse_axpy(Complex(1.0, 0.0), coefs.col(j), b);
  return b;
}

CVector atom_direction(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                       std::size_t j, const SparseColumn& c_new) {
  if (dict.rows() != y.rows()) throw DimensionError("atom_direction: signal dim mismatch");
  if (coefs.signal_count() != y.cols() || coefs.atom_count() != dict.cols())
    throw DimensionError("atom_direction: coefficient shape mismatch");
  if (c_new.length() != y.cols()) throw DimensionError("atom_direction: code length mismatch");
  if (j >= dict.cols()) throw DimensionError("atom_direction: atom index out of range");

  // Y c_new through the stored support only.
  CVector h(y.rows(), Complex(0.0, 0.0));
  const auto& idx = c_new.support();
  const auto& val = c_new.values();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto col = y.col(idx[k]);
    const Complex v = val[k];
    for (std::size_t r = 0; r < y.rows(); ++r) h[r] += col[r] * v;
  }

  CVector u(coefs.atom_count());
  for (std::size_t k = 0; k < coefs.atom_count(); ++k) u[k] = sparse_inner(coefs.col(k), c_new);
  const CVector du = matvec(dict, u);
  for (std::size_t r = 0; r < y.rows(); ++r) h[r] -= du[r];

  // Add back atom j's own term, which the full sum above removed.
  const auto dj = dict.col(j);
  for (std::size_t r = 0; r < y.rows(); ++r) h[r] += dj[r] * u[j];
  return h;
}

CVector atom_update(const CVector& direction, bool code_nonzero, const CVector& fallback) {
  if (fallback.size() != direction.size()) throw DimensionError("atom_update: fallback length mismatch");
  if (!code_nonzero) return fallback;
  const double norm = norm2(direction);
  if (norm == 0.0)
    throw NumericError("atom_update: zero direction with nonzero code (corrupted state)");
  CVector out(direction.size());
  for (std::size_t i = 0; i < direction.size(); ++i) out[i] = direction[i] / norm;
  return out;
}

DenseMatrix approx_signals(const DenseMatrix& dict, const CoefMatrix& coefs) {
  if (dict.cols() != coefs.atom_count()) throw DimensionError("approx_signals: atom count mismatch");
  DenseMatrix approx(dict.rows(), coefs.signal_count());
  for (std::size_t j = 0; j < coefs.atom_count(); ++j) {
    const SparseColumn& cj = coefs.col(j);
    const auto dj = dict.col(j);
    const auto& idx = cj.support();
    const auto& val = cj.values();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto out = approx.col(idx[k]);
      const Complex w = std::conj(val[k]);
      for (std::size_t r = 0; r < dict.rows(); ++r) out[r] += dj[r] * w;
    }
  }
  return approx;
}

double fit_frobenius_sq(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs) {
  if (dict.rows() != y.rows() || coefs.signal_count() != y.cols() ||
      coefs.atom_count() != dict.cols())
    throw DimensionError("fit_frobenius_sq: shape mismatch");
  const DenseMatrix approx = approx_signals(dict, coefs);
  double s = 0.0;
  for (std::size_t i = 0; i < y.data().size(); ++i) s += std::norm(y.data()[i] - approx.data()[i]);
  return s;
}

double objective_l0(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                    double lambda) {
  return fit_frobenius_sq(y, dict, coefs) + lambda * lambda * static_cast<double>(coefs.nnz());
}

double objective_l1(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs,
                    double mu) {
  return fit_frobenius_sq(y, dict, coefs) + mu * coefs.norm1();
}

FeasibilityFlags check_feasibility(const DenseMatrix& dict, const CoefMatrix& coefs, double cap,
                                   double norm_tol) {
  FeasibilityFlags flags;
  flags.atoms_unit_norm = true;
  for (std::size_t j = 0; j < dict.cols(); ++j) {
    if (std::abs(norm2(dict.col_vector(j)) - 1.0) > norm_tol) {
      flags.atoms_unit_norm = false;
      break;
    }
  }
  flags.coefs_bounded = coefs.linf() <= cap;
  return flags;
}

namespace {

double penalty_value(const CoefMatrix& coefs, const std::variant<L0CodeParams, L1CodeParams>& p) {
  if (std::holds_alternative<L0CodeParams>(p)) {
    const double lambda = std::get<L0CodeParams>(p).lambda;
    return lambda * lambda * static_cast<double>(coefs.nnz());
  }
  return std::get<L1CodeParams>(p).mu * coefs.norm1();
}

LearnState run_learn(const DenseMatrix& y, LearnState state, const LearnConfig& cfg) {
  if (y.rows() == 0 || y.cols() == 0) throw ParameterError("learn: empty data");
  cfg.validate(y.rows());
  if (state.dictionary.rows() != y.rows() || state.dictionary.cols() != cfg.num_atoms)
    throw DimensionError("learn: initial dictionary shape mismatch");
  if (state.coefs.signal_count() != y.cols() || state.coefs.atom_count() != cfg.num_atoms)
    throw DimensionError("learn: initial coefficient shape mismatch");
  for (std::size_t j = 0; j < cfg.num_atoms; ++j) {
    if (std::abs(norm2(state.dictionary.col_vector(j)) - 1.0) > 1e-8)
      throw ParameterError("learn: initial dictionary columns must have unit norm");
  }
  const bool is_l0 = std::holds_alternative<L0CodeParams>(cfg.penalty);
  if (is_l0 && state.coefs.linf() > std::get<L0CodeParams>(cfg.penalty).cap)
    throw ParameterError("learn: initial coefficients exceed the l-inf cap");

  CVector fallback = cfg.fallback_atom;
  if (fallback.empty()) {
    fallback.assign(y.rows(), Complex(0.0, 0.0));
    fallback[0] = Complex(1.0, 0.0);
  }

  const auto objective = [&](const DenseMatrix& dict, const CoefMatrix& coefs) {
    return fit_frobenius_sq(y, dict, coefs) + penalty_value(coefs, cfg.penalty);
  };
  const auto record_outer = [&]() {
    const double fit = fit_frobenius_sq(y, state.dictionary, state.coefs);
    state.objective_trace.push_back(fit + penalty_value(state.coefs, cfg.penalty));
    state.fit_frob_trace.push_back(std::sqrt(fit));
    state.nnz_trace.push_back(state.coefs.nnz());
  };

  record_outer();

  std::vector<std::size_t> order(cfg.num_atoms);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng order_rng(cfg.order_seed);

  for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
    const DenseMatrix prev_dict = state.dictionary;
    const CoefMatrix prev_coefs = state.coefs;

    if (cfg.atom_order == AtomOrder::kSeededRandom) order_rng.shuffle(order);

    for (const std::size_t j : order) {
      // Sparse coding for atom j.
      const CVector b = residual_correlations(y, state.dictionary, state.coefs, j);
      SparseColumn c_new;
      if (is_l0) {
        L0CodeResult r = sparse_code_l0(b, std::get<L0CodeParams>(cfg.penalty));
        if (!r.unique) ++state.nonunique_code_events;
        c_new = std::move(r.code);
      } else {
        c_new = sparse_code_l1(b, std::get<L1CodeParams>(cfg.penalty));
      }

      if (cfg.record_inner_objectives) {
        const SparseColumn saved = state.coefs.col(j);
        state.coefs.set_col(j, c_new);
        state.inner_objective_trace.push_back(objective(state.dictionary, state.coefs));
        state.coefs.set_col(j, saved);
      }

      // Atom update (skipped in fixed-dictionary coding mode).
      if (cfg.update_atoms) {
        const CVector h = atom_direction(y, state.dictionary, state.coefs, j, c_new);
        const CVector d_new = atom_update(h, !c_new.empty(), fallback);
        state.dictionary.set_col(j, d_new);
      }
      state.coefs.set_col(j, std::move(c_new));

      if (cfg.record_inner_objectives) {
        state.inner_objective_trace.push_back(objective(state.dictionary, state.coefs));
      }
    }

    record_outer();
    state.dict_diff_trace.push_back(frobenius_diff(state.dictionary, prev_dict));
    state.coef_diff_trace.push_back(frobenius_diff(state.coefs, prev_coefs));
  }
  return state;
}

}  // namespace

LearnState soup_dillo(const DenseMatrix& y, LearnState init, const LearnConfig& cfg) {
  if (!std::holds_alternative<L0CodeParams>(cfg.penalty))
    throw ParameterError("soup_dillo: config must carry L0CodeParams");
  return run_learn(y, std::move(init), cfg);
}

LearnState os_dl(const DenseMatrix& y, LearnState init, const LearnConfig& cfg) {
  if (!std::holds_alternative<L1CodeParams>(cfg.penalty))
    throw ParameterError("os_dl: config must carry L1CodeParams");
  return run_learn(y, std::move(init), cfg);
}

}  // namespace soup
