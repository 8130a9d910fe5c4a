#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace soup {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

inline double magnitude(Complex z) { return std::abs(z); }

// Unit-modulus phase factor of z. Defined as 1 for z = 0 so that
// expressions of the form magnitude * phase_unit(z) stay total; the
// magnitude factor is zero exactly when this choice matters.
inline Complex phase_unit(Complex z) {
  const double m = std::abs(z);
  if (m == 0.0) return Complex(1.0, 0.0);
  return z / m;
}

inline double norm2(const CVector& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline double norm2_sq(const CVector& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return s;
}

// <u, v> = sum_i conj(u_i) v_i
inline Complex inner(const CVector& u, const CVector& v) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

}  // namespace soup
