#include "soup/dense_matrix.hpp"

#include <cmath>

namespace soup {

double frobenius(const DenseMatrix& m) {
  double s = 0.0;
  for (const Complex& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("frobenius_diff: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s);
}

CVector matvec(const DenseMatrix& m, const CVector& v) {
  if (m.cols() != v.size()) throw DimensionError("matvec: cols(M) != length(v)");
  CVector out(m.rows(), Complex(0.0, 0.0));
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const Complex vc = v[c];
    if (vc == Complex(0.0, 0.0)) continue;
    const auto column = m.col(c);
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] += column[r] * vc;
  }
  return out;
}

CVector hermitian_matvec(const DenseMatrix& m, const CVector& v) {
  if (m.rows() != v.size()) throw DimensionError("hermitian_matvec: rows(M) != length(v)");
  CVector out(m.cols(), Complex(0.0, 0.0));
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto column = m.col(c);
    Complex s(0.0, 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) s += std::conj(column[r]) * v[r];
    out[c] = s;
  }
  return out;
}

}  // namespace soup
