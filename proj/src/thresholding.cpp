#include "soup/thresholding.hpp"

#include <cmath>

namespace soup {

CVector hard_threshold(const CVector& b, double lambda) {
  if (lambda < 0.0) throw ParameterError("hard_threshold: lambda must be >= 0");
  CVector out(b.size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (std::abs(b[i]) >= lambda) out[i] = b[i];
  }
  return out;
}

L0CodeResult sparse_code_l0(const CVector& b, const L0CodeParams& params) {
  params.validate();
  L0CodeResult res;
  res.code = SparseColumn(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double mag = std::abs(b[i]);
    if (mag == params.lambda && mag > 0.0) res.unique = false;
    if (mag < params.lambda) continue;
    if (mag <= params.cap) {
      res.code.push_back(i, b[i]);
    } else {
      res.code.push_back(i, params.cap * phase_unit(b[i]));
    }
  }
  return res;
}

SparseColumn sparse_code_l1(const CVector& b, const L1CodeParams& params) {
  params.validate();
  SparseColumn code(b.size());
  const double half_mu = params.mu / 2.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double mag = std::abs(b[i]);
    if (mag > half_mu) code.push_back(i, (mag - half_mu) * phase_unit(b[i]));
  }
  return code;
}

}  // namespace soup
