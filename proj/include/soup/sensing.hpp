#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "soup/image.hpp"

struct fftw_plan_s;

namespace soup {

// Unitary 2-D DFT (forward and inverse both scaled by 1/sqrt(h*w)) in the
// standard uncentered frequency layout, row-major. Immutable after
// construction; application is serialized internally so a shared instance is
// thread-safe.
class FourierOperator {
 public:
  FourierOperator(std::size_t height, std::size_t width);
  ~FourierOperator();
  FourierOperator(const FourierOperator&) = delete;
  FourierOperator& operator=(const FourierOperator&) = delete;

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  CVector forward(const CVector& img) const;
  CVector inverse(const CVector& freq) const;

 private:
  std::size_t height_;
  std::size_t width_;
  Complex* buf_in_;
  Complex* buf_out_;
  fftw_plan_s* plan_fwd_;
  fftw_plan_s* plan_bwd_;
  mutable std::mutex mutex_;
};

// Centered index (i, j) <-> uncentered DFT bin; DC sits at (h/2, w/2) in
// centered coordinates.
std::size_t centered_to_uncentered(std::size_t i, std::size_t n);
std::size_t uncentered_to_centered(std::size_t k, std::size_t n);

enum class SamplingScheme {
  kCartesian1D,  // full k-space rows (variable-density phase encodes)
  kRandom2D,     // variable-density random points
  kUnspecified,  // e.g. loaded from a file
};

// Binary k-space membership grid in DC-centered coordinates. The measurement
// vector layout is the row-major scan of this grid restricted to kept cells.
struct SamplingMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> kept;  // row-major, centered
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::kUnspecified;

  bool at(std::size_t r, std::size_t c) const { return kept[r * width + c] != 0; }
  std::size_t kept_count() const;
  double achieved_factor() const;
};

// Variable-density mask: keep probability decays as (1 - d/d_max)^4 with the
// distance d from the k-space center, a central band (cartesian) or disk
// (2-D) of center_fraction * extent is always kept, and the kept count is
// trimmed/augmented to hit the requested factor exactly (within rounding).
// Deterministic for a fixed seed.
SamplingMask make_mask(std::size_t height, std::size_t width, SamplingScheme scheme, double factor,
                       std::uint64_t seed, double center_fraction = 0.04);

// Generic measurement operator with an adjoint.
class MeasurementOp {
 public:
  virtual ~MeasurementOp() = default;
  virtual std::size_t image_height() const = 0;
  virtual std::size_t image_width() const = 0;
  virtual std::size_t measurement_count() const = 0;
  virtual CVector forward(const Image& y) const = 0;
  virtual Image adjoint(const CVector& z) const = 0;
};

// Undersampled-Fourier encoding: unitary 2-D DFT followed by restriction to
// the mask, in mask raster order. The adjoint embeds measurements at their
// k-space locations (zeros elsewhere) and inverse-transforms, which for this
// operator equals the pseudoinverse applied to z (zero-filled
// reconstruction).
class FourierSamplingOp final : public MeasurementOp {
 public:
  explicit FourierSamplingOp(SamplingMask mask);

  std::size_t image_height() const override { return mask_.height; }
  std::size_t image_width() const override { return mask_.width; }
  std::size_t measurement_count() const override { return count_; }
  const SamplingMask& mask() const { return mask_; }
  const FourierOperator& fourier() const { return fft_; }

  CVector forward(const Image& y) const override;
  Image adjoint(const CVector& z) const override;

  // Scatters a measurement vector onto the uncentered frequency grid; the
  // frequency-domain half of adjoint().
  CVector embed(const CVector& z) const;

 private:
  SamplingMask mask_;
  std::size_t count_;
  FourierOperator fft_;
};

// Mask file: "SOUPMASK v1\n<h> <w>\n" then h lines of w '0'/'1' characters
// (centered coordinates).
void write_mask(const std::string& path, const SamplingMask& mask);
SamplingMask read_mask(const std::string& path);

// Measurement file: magic "SOUPKSP1", u32 h, u32 w, u32 count, then count
// (re, im) f64 pairs in mask raster order; little-endian.
void write_kspace(const std::string& path, std::size_t height, std::size_t width,
                  const CVector& z);
struct KspaceData {
  std::size_t height = 0;
  std::size_t width = 0;
  CVector samples;
};
KspaceData read_kspace(const std::string& path);

}  // namespace soup
