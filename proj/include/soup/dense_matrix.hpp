#pragma once

#include <cstddef>
#include <span>

#include "soup/complex_ops.hpp"
#include "soup/errors.hpp"

namespace soup {

// Dense complex matrix, column-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<Complex> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const Complex> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  CVector col_vector(std::size_t c) const {
    return CVector(data_.begin() + static_cast<std::ptrdiff_t>(c * rows_),
                   data_.begin() + static_cast<std::ptrdiff_t>((c + 1) * rows_));
  }

  void set_col(std::size_t c, const CVector& v) {
    if (v.size() != rows_) throw DimensionError("set_col: length mismatch");
    std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(c * rows_));
  }

  const CVector& data() const { return data_; }
  CVector& data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVector data_;
};

double frobenius(const DenseMatrix& m);
double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b);

// y = M v
CVector matvec(const DenseMatrix& m, const CVector& v);

// y = M^H v, i.e. y_k = sum_i conj(M[i,k]) v_i
CVector hermitian_matvec(const DenseMatrix& m, const CVector& v);

}  // namespace soup
