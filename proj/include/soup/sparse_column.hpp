#pragma once

#include <cstddef>
#include <vector>

#include "soup/complex_ops.hpp"
#include "soup/errors.hpp"

namespace soup {

// Sparse complex column vector: strictly increasing support indices and the
// values stored at them. Entries that are exactly zero are never stored;
// thresholding operations are the only place values get zeroed, so |support|
// is the l0 "norm" of the vector.
class SparseColumn {
 public:
  SparseColumn() = default;
  explicit SparseColumn(std::size_t length) : length_(length) {}

  // Builds from parallel arrays; indices must be strictly increasing and
  // < length. Zero values are dropped.
  SparseColumn(std::size_t length, std::vector<std::size_t> support, CVector values);

  static SparseColumn from_dense(const CVector& v);

  std::size_t length() const { return length_; }
  std::size_t nnz() const { return support_.size(); }
  bool empty() const { return support_.empty(); }

  const std::vector<std::size_t>& support() const { return support_; }
  const CVector& values() const { return values_; }

  // Appends an entry; index must exceed the current last support index.
  // Exact zeros are silently skipped.
  void push_back(std::size_t index, Complex value);

  CVector to_dense() const;

  double norm2() const { return soup::norm2(values_); }
  double norm1() const;
  double linf() const;

 private:
  std::size_t length_ = 0;
  std::vector<std::size_t> support_;
  CVector values_;
};

// acc += alpha * densify(c); touches only the stored entries of c.
void sparse_axpy(Complex alpha, const SparseColumn& c, CVector& acc);

// <a, b> = sum_i conj(a_i) b_i over the intersection of supports.
Complex sparse_inner(const SparseColumn& a, const SparseColumn& b);

// ||a - b||_2^2 via a sorted-merge over both supports.
double sparse_diff_norm_sq(const SparseColumn& a, const SparseColumn& b);

}  // namespace soup
