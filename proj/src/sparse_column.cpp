#include "soup/sparse_column.hpp"

#include <cmath>

namespace soup {

SparseColumn::SparseColumn(std::size_t length, std::vector<std::size_t> support, CVector values)
    : length_(length) {
  if (support.size() != values.size())
    throw DimensionError("SparseColumn: support/values size mismatch");
  support_.reserve(support.size());
  values_.reserve(values.size());
  for (std::size_t k = 0; k < support.size(); ++k) {
    push_back(support[k], values[k]);
  }
}

SparseColumn SparseColumn::from_dense(const CVector& v) {
  SparseColumn c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != Complex(0.0, 0.0)) c.push_back(i, v[i]);
  }
  return c;
}

void SparseColumn::push_back(std::size_t index, Complex value) {
  if (index >= length_) throw DimensionError("SparseColumn: index out of range");
  if (!support_.empty() && index <= support_.back())
    throw ParameterError("SparseColumn: support indices must be strictly increasing");
  if (value == Complex(0.0, 0.0)) return;
  support_.push_back(index);
  values_.push_back(value);
}

CVector SparseColumn::to_dense() const {
  CVector v(length_, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < support_.size(); ++k) v[support_[k]] = values_[k];
  return v;
}

double SparseColumn::norm1() const {
  double s = 0.0;
  for (const Complex& z : values_) s += std::abs(z);
  return s;
}

double SparseColumn::linf() const {
  double m = 0.0;
  for (const Complex& z : values_) m = std::max(m, std::abs(z));
  return m;
}

void sparse_axpy(Complex alpha, const SparseColumn& c, CVector& acc) {
  if (c.length() != acc.size()) throw DimensionError("sparse_axpy: length mismatch");
  if (alpha == Complex(0.0, 0.0)) return;
  const auto& idx = c.support();
  const auto& val = c.values();
  for (std::size_t k = 0; k < idx.size(); ++k) acc[idx[k]] += alpha * val[k];
}

Complex sparse_inner(const SparseColumn& a, const SparseColumn& b) {
  if (a.length() != b.length()) throw DimensionError("sparse_inner: length mismatch");
  Complex s(0.0, 0.0);
  std::size_t i = 0, j = 0;
  const auto& ia = a.support();
  const auto& ib = b.support();
  while (i < ia.size() && j < ib.size()) {
    if (ia[i] < ib[j]) {
      ++i;
    } else if (ia[i] > ib[j]) {
      ++j;
    } else {
      s += std::conj(a.values()[i]) * b.values()[j];
      ++i;
      ++j;
    }
  }
  return s;
}

double sparse_diff_norm_sq(const SparseColumn& a, const SparseColumn& b) {
  if (a.length() != b.length()) throw DimensionError("sparse_diff_norm_sq: length mismatch");
  double s = 0.0;
  std::size_t i = 0, j = 0;
  const auto& ia = a.support();
  const auto& ib = b.support();
  while (i < ia.size() || j < ib.size()) {
    if (j == ib.size() || (i < ia.size() && ia[i] < ib[j])) {
      s += std::norm(a.values()[i]);
      ++i;
    } else if (i == ia.size() || ib[j] < ia[i]) {
      s += std::norm(b.values()[j]);
      ++j;
    } else {
      s += std::norm(a.values()[i] - b.values()[j]);
      ++i;
      ++j;
    }
  }
  return s;
}

}  // namespace soup
