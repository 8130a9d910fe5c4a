#pragma once

#include <cstddef>
#include <vector>

#include "soup/sparse_column.hpp"

namespace soup {

// N x J sparse coefficient matrix stored as J sparse columns of length N.
// Row i holds the conjugate-transposed code of signal i, so the rank-one
// expansion of the data approximation is sum_j d_j c_j^H.
class CoefMatrix {
 public:
  CoefMatrix() = default;
  CoefMatrix(std::size_t signal_count, std::size_t atom_count)
      : signal_count_(signal_count), columns_(atom_count, SparseColumn(signal_count)) {}

  std::size_t signal_count() const { return signal_count_; }
  std::size_t atom_count() const { return columns_.size(); }

  const SparseColumn& col(std::size_t j) const { return columns_[j]; }

  void set_col(std::size_t j, SparseColumn c) {
    if (c.length() != signal_count_) throw DimensionError("CoefMatrix::set_col: length mismatch");
    columns_[j] = std::move(c);
  }

  std::size_t nnz() const {
    std::size_t s = 0;
    for (const auto& c : columns_) s += c.nnz();
    return s;
  }

  double norm1() const {
    double s = 0.0;
    for (const auto& c : columns_) s += c.norm1();
    return s;
  }

  double linf() const {
    double m = 0.0;
    for (const auto& c : columns_) m = std::max(m, c.linf());
    return m;
  }

  double frobenius_sq() const {
    double s = 0.0;
    for (const auto& c : columns_) s += c.norm2() * c.norm2();
    return s;
  }

 private:
  std::size_t signal_count_ = 0;
  std::vector<SparseColumn> columns_;
};

inline double frobenius_diff(const CoefMatrix& a, const CoefMatrix& b) {
  if (a.signal_count() != b.signal_count() || a.atom_count() != b.atom_count())
    throw DimensionError("CoefMatrix frobenius_diff: shape mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.atom_count(); ++j) s += sparse_diff_norm_sq(a.col(j), b.col(j));
  return std::sqrt(s);
}

}  // namespace soup
