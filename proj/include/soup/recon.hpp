#pragma once

#include <cstddef>
#include <vector>

#include "soup/patches.hpp"
#include "soup/sensing.hpp"
#include "soup/soup_learn.hpp"

namespace soup {

enum class ImageSolver { kFourierClosedForm, kConjugateGradient };

struct ReconConfig {
  double nu = 0.0;  // data-consistency weight
  // Sparsity weight per outer iteration: lambda for the l0 problem, mu for
  // the l1 problem. Length must equal outer_iters.
  std::vector<double> weight_schedule;
  double cap = 1e8;  // l-inf bound on coefficients (l0 problem only)
  std::size_t inner_learn_iters = 5;
  std::size_t outer_iters = 0;
  PatchGeometry geom;
  std::size_t num_atoms = 0;
  ImageSolver solver = ImageSolver::kFourierClosedForm;
  double cg_tol = 1e-10;
  std::size_t cg_max_iters = 200;

  void validate() const;
};

struct ReconState {
  Image image;
  LearnState learn;
  // Entry 0 is the initial state evaluated at the first schedule weight; one
  // more entry per outer iteration. Empty when outer_iters = 0.
  std::vector<double> objective_trace;
  std::vector<double> psnr_trace;        // only when a reference is supplied
  std::vector<double> image_diff_trace;  // ||y^t - y^{t-1}||_2 per outer iteration
};

// Zero-filled start: y^0 = A^+ z, zero codes, overcomplete-DCT dictionary.
ReconState initial_recon_state(const FourierSamplingOp& op, const CVector& z,
                               const PatchGeometry& geom, std::size_t num_atoms);

// Exact minimizer of  nu ||A y - z||^2 + sum_i ||P_i y - D x_i||^2  for the
// undersampled-Fourier operator, computed per frequency: S(k)/beta off the
// mask and (S(k) + nu S0(k)) / (beta + nu) on it, with S the spectrum of the
// aggregated patch approximations, S0 the zero-filled measurement spectrum
// and beta = n. Requires stride 1 with wrap-around (so the patch normal
// matrix is beta I); other geometries must use the CG path.
Image image_update_fourier(const DenseMatrix& dict, const CoefMatrix& coefs, const CVector& z,
                           const FourierSamplingOp& op, double nu, const PatchGeometry& geom);

// Conjugate gradients on the normal equation
//   (sum_i P_i^T P_i + nu A^H A) y = sum_i P_i^T D x_i + nu A^H z
// from a zero start, for any measurement operator with an adjoint. Stops at
// relative residual <= tol; raises NumericError (carrying the final
// residual) if max_iters is exhausted first.
Image image_update_cg(const DenseMatrix& dict, const CoefMatrix& coefs, const CVector& z,
                      const MeasurementOp& op, double nu, const PatchGeometry& geom, double tol,
                      std::size_t max_iters);

// Dictionary-blind reconstruction: alternate K iterations of SOUP-DILLO
// (warm-started) on the current image's patches with the exact image update,
// for outer_iters rounds. The objective trace is evaluated at each
// iteration's own schedule weight.
ReconState soup_dillo_mri(const CVector& z, const FourierSamplingOp& op, ReconState init,
                          const ReconConfig& cfg, const Image* reference = nullptr);

// Same outer loop with OS-DL inner learning and the l1 objective.
ReconState soup_dilli_mri(const CVector& z, const FourierSamplingOp& op, ReconState init,
                          const ReconConfig& cfg, const Image* reference = nullptr);

// Linearly interpolated weight schedule from `first` to `last` across
// `count` outer iterations (count = 1 yields {last}).
std::vector<double> linear_schedule(double first, double last, std::size_t count);

}  // namespace soup
