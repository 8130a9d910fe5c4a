#pragma once

#include <optional>

#include "soup/coef_matrix.hpp"
#include "soup/dense_matrix.hpp"
#include "soup/image.hpp"

namespace soup {

// PSNR value reported for bit-exact reconstructions instead of infinity.
inline constexpr double kPsnrCap = 300.0;

struct MetricReport {
  double nsre_pct = 0.0;
  double sparsity_pct = 0.0;
  std::optional<double> psnr_db;
  double objective = 0.0;
};

// Normalized sparse representation error ||Y - D C^H||_F / ||Y||_F.
double nsre(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs);

// Fraction of nonzero coefficients, nnz(C) / (signal_dim * signal_count).
double sparsity_factor(const CoefMatrix& coefs, std::size_t signal_dim);

// 20 log10( peak |ref| / rms(|recon| - |ref|) ), magnitudes only; capped at
// kPsnrCap for exact matches.
double psnr(const Image& recon, const Image& reference);

}  // namespace soup
