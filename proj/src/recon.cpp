#include "soup/recon.hpp"

#include <cmath>
#include <sstream>

#include "soup/metrics.hpp"

namespace soup {

void ReconConfig::validate() const {
  if (!(nu > 0.0)) throw ParameterError("ReconConfig: nu must be > 0");
  if (weight_schedule.size() != outer_iters)
    throw ParameterError("ReconConfig: schedule length must equal outer_iters");
  for (const double w : weight_schedule) {
    if (!(w > 0.0)) throw ParameterError("ReconConfig: schedule weights must be > 0");
  }
  if (num_atoms == 0) throw ParameterError("ReconConfig: num_atoms must be >= 1");
  geom.validate();
}

ReconState initial_recon_state(const FourierSamplingOp& op, const CVector& z,
                               const PatchGeometry& geom, std::size_t num_atoms) {
  geom.validate();
  if (geom.image_height != op.image_height() || geom.image_width != op.image_width())
    throw DimensionError("initial_recon_state: geometry does not match operator grid");
  ReconState state;
  state.image = op.adjoint(z);
  state.learn = initial_learn_state(geom.patch_dim(), num_atoms, geom.patch_count());
  return state;
}

Image image_update_fourier(const DenseMatrix& dict, const CoefMatrix& coefs, const CVector& z,
                           const FourierSamplingOp& op, double nu, const PatchGeometry& geom) {
  geom.validate();
  if (geom.stride != 1 || !geom.wrap)
    throw ParameterError(
        "image_update_fourier: requires stride 1 with wrap-around; use the CG solver for other "
        "geometries");
  if (!(nu > 0.0)) throw ParameterError("image_update_fourier: nu must be > 0");

  const double beta = static_cast<double>(geom.patch_dim());
  const Image rhs_img = aggregate_patches(approx_signals(dict, coefs), geom);
  const CVector spectrum = op.fourier().forward(rhs_img.pixels);
  const CVector data_spectrum = op.embed(z);

  const std::size_t h = geom.image_height;
  const std::size_t w = geom.image_width;
  CVector solution(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t ur = centered_to_uncentered(r, h);
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t q = ur * w + centered_to_uncentered(c, w);
      if (op.mask().at(r, c)) {
        solution[q] = (spectrum[q] + nu * data_spectrum[q]) / (beta + nu);
      } else {
        solution[q] = spectrum[q] / beta;
      }
    }
  }

  Image out(h, w);
  out.pixels = op.fourier().inverse(solution);
  return out;
}

Image image_update_cg(const DenseMatrix& dict, const CoefMatrix& coefs, const CVector& z,
                      const MeasurementOp& op, double nu, const PatchGeometry& geom, double tol,
                      std::size_t max_iters) {
  geom.validate();
  if (!(nu > 0.0)) throw ParameterError("image_update_cg: nu must be > 0");
  const std::size_t h = geom.image_height;
  const std::size_t w = geom.image_width;
  if (op.image_height() != h || op.image_width() != w)
    throw DimensionError("image_update_cg: operator grid does not match geometry");

  const std::vector<double> weights = overlap_weights(geom);
  const auto apply = [&](const Image& x) {
    Image ax = op.adjoint(op.forward(x));
    for (std::size_t i = 0; i < ax.pixels.size(); ++i)
      ax.pixels[i] = weights[i] * x.pixels[i] + nu * ax.pixels[i];
    return ax;
  };

  Image rhs = aggregate_patches(approx_signals(dict, coefs), geom);
  {
    const Image data_term = op.adjoint(z);
    for (std::size_t i = 0; i < rhs.pixels.size(); ++i) rhs.pixels[i] += nu * data_term.pixels[i];
  }

  const double rhs_norm = norm2(rhs);
  Image x(h, w);
  if (rhs_norm == 0.0) return x;

  Image residual = rhs;
  Image direction = residual;
  double rs = norm2_sq(residual.pixels);

  for (std::size_t it = 0; it < max_iters; ++it) {
    const Image ad = apply(direction);
    const double denom = inner(direction.pixels, ad.pixels).real();
    if (denom <= 0.0)
      throw NumericError("image_update_cg: system matrix is not positive definite");
    const double alpha = rs / denom;
    for (std::size_t i = 0; i < x.pixels.size(); ++i) {
      x.pixels[i] += alpha * direction.pixels[i];
      residual.pixels[i] -= alpha * ad.pixels[i];
    }
    const double rs_new = norm2_sq(residual.pixels);
    if (std::sqrt(rs_new) <= tol * rhs_norm) return x;
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < direction.pixels.size(); ++i)
      direction.pixels[i] = residual.pixels[i] + beta * direction.pixels[i];
    rs = rs_new;
  }

  std::ostringstream msg;
  msg << "image_update_cg: no convergence within " << max_iters
      << " iterations (relative residual " << std::sqrt(rs) / rhs_norm << ")";
  throw NumericError(msg.str());
}

std::vector<double> linear_schedule(double first, double last, std::size_t count) {
  std::vector<double> s;
  s.reserve(count);
  if (count == 0) return s;
  if (count == 1) {
    s.push_back(last);
    return s;
  }
  for (std::size_t t = 0; t < count; ++t) {
    const double a = static_cast<double>(t) / static_cast<double>(count - 1);
    s.push_back(first + (last - first) * a);
  }
  return s;
}

namespace {

ReconState run_recon(const CVector& z, const FourierSamplingOp& op, ReconState state,
                     const ReconConfig& cfg, const Image* reference, bool is_l0) {
  cfg.validate();
  if (z.size() != op.measurement_count())
    throw DimensionError("recon: measurement vector does not match mask");
  if (cfg.geom.image_height != op.image_height() || cfg.geom.image_width != op.image_width())
    throw DimensionError("recon: geometry does not match operator grid");
  if (state.image.height != cfg.geom.image_height || state.image.width != cfg.geom.image_width)
    throw DimensionError("recon: initial image does not match geometry");
  if (reference != nullptr &&
      (reference->height != state.image.height || reference->width != state.image.width))
    throw DimensionError("recon: reference image shape mismatch");
  if (cfg.outer_iters == 0) return state;

  const auto objective = [&](const Image& img, const LearnState& learn, double weight) {
    const DenseMatrix patches = extract_patches(img, cfg.geom);
    const double fit = fit_frobenius_sq(patches, learn.dictionary, learn.coefs);
    const CVector ay = op.forward(img);
    double data = 0.0;
    for (std::size_t i = 0; i < ay.size(); ++i) data += std::norm(ay[i] - z[i]);
    const double penalty = is_l0 ? weight * weight * static_cast<double>(learn.coefs.nnz())
                                 : weight * learn.coefs.norm1();
    return cfg.nu * data + fit + penalty;
  };

  state.objective_trace.push_back(objective(state.image, state.learn, cfg.weight_schedule[0]));
  if (reference != nullptr) state.psnr_trace.push_back(psnr(state.image, *reference));

  for (std::size_t t = 0; t < cfg.outer_iters; ++t) {
    const double weight = cfg.weight_schedule[t];

    LearnConfig lcfg;
    lcfg.num_atoms = cfg.num_atoms;
    lcfg.iterations = cfg.inner_learn_iters;
    if (is_l0) {
      lcfg.penalty = L0CodeParams(weight, cfg.cap);
    } else {
      lcfg.penalty = L1CodeParams(weight);
    }

    // Warm start from (D, C); the inner traces are per outer iteration (they
    // refer to this iteration's patch data), so drop the previous round's.
    state.learn.objective_trace.clear();
    state.learn.fit_frob_trace.clear();
    state.learn.nnz_trace.clear();
    state.learn.dict_diff_trace.clear();
    state.learn.coef_diff_trace.clear();
    state.learn.inner_objective_trace.clear();

    const DenseMatrix patches = extract_patches(state.image, cfg.geom);
    LearnState learned = is_l0 ? soup_dillo(patches, std::move(state.learn), lcfg)
                               : os_dl(patches, std::move(state.learn), lcfg);
    state.learn = std::move(learned);

    Image updated;
    if (cfg.solver == ImageSolver::kFourierClosedForm) {
      updated = image_update_fourier(state.learn.dictionary, state.learn.coefs, z, op, cfg.nu,
                                     cfg.geom);
    } else {
      updated = image_update_cg(state.learn.dictionary, state.learn.coefs, z, op, cfg.nu, cfg.geom,
                                cfg.cg_tol, cfg.cg_max_iters);
    }

    state.image_diff_trace.push_back(norm2_diff(updated, state.image));
    state.image = std::move(updated);
    state.objective_trace.push_back(objective(state.image, state.learn, weight));
    if (reference != nullptr) state.psnr_trace.push_back(psnr(state.image, *reference));
  }
  return state;
}

}  // namespace

ReconState soup_dillo_mri(const CVector& z, const FourierSamplingOp& op, ReconState init,
                          const ReconConfig& cfg, const Image* reference) {
  return run_recon(z, op, std::move(init), cfg, reference, /*is_l0=*/true);
}

ReconState soup_dilli_mri(const CVector& z, const FourierSamplingOp& op, ReconState init,
                          const ReconConfig& cfg, const Image* reference) {
  return run_recon(z, op, std::move(init), cfg, reference, /*is_l0=*/false);
}

}  // namespace soup
