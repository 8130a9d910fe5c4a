#include "soup/metrics.hpp"

#include <cmath>

#include "soup/soup_learn.hpp"

namespace soup {

double nsre(const DenseMatrix& y, const DenseMatrix& dict, const CoefMatrix& coefs) {
  const double y_norm = frobenius(y);
  if (y_norm == 0.0) throw NumericError("nsre: undefined for zero data");
  return std::sqrt(fit_frobenius_sq(y, dict, coefs)) / y_norm;
}

double sparsity_factor(const CoefMatrix& coefs, std::size_t signal_dim) {
  if (signal_dim == 0 || coefs.signal_count() == 0)
    throw ParameterError("sparsity_factor: empty dimensions");
  return static_cast<double>(coefs.nnz()) /
         (static_cast<double>(signal_dim) * static_cast<double>(coefs.signal_count()));
}

double psnr(const Image& recon, const Image& reference) {
  if (recon.height != reference.height || recon.width != reference.width)
    throw DimensionError("psnr: image shape mismatch");
  const double peak = peak_magnitude(reference);
  if (peak == 0.0) throw NumericError("psnr: reference image is identically zero");
  double err_sq = 0.0;
  for (std::size_t i = 0; i < recon.pixels.size(); ++i) {
    const double d = std::abs(recon.pixels[i]) - std::abs(reference.pixels[i]);
    err_sq += d * d;
  }
  const double rms = std::sqrt(err_sq / static_cast<double>(recon.pixels.size()));
  if (rms == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 20.0 * std::log10(peak / rms));
}

}  // namespace soup
