#include "soup/sensing.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "soup/binary_io.hpp"
#include "soup/rng.hpp"

namespace soup {

namespace {
// FFTW planning is not reentrant; execution through private buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierOperator::FourierOperator(std::size_t height, std::size_t width)
    : height_(height), width_(width) {
  if (height == 0 || width == 0) throw ParameterError("FourierOperator: empty grid");
  const std::size_t n = height * width;
  buf_in_ = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n));
  buf_out_ = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n));
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width),
                               reinterpret_cast<fftw_complex*>(buf_in_),
                               reinterpret_cast<fftw_complex*>(buf_out_), FFTW_FORWARD,
                               FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width),
                               reinterpret_cast<fftw_complex*>(buf_in_),
                               reinterpret_cast<fftw_complex*>(buf_out_), FFTW_BACKWARD,
                               FFTW_ESTIMATE);
}

FourierOperator::~FourierOperator() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan_fwd_);
  fftw_destroy_plan(plan_bwd_);
  fftw_free(buf_in_);
  fftw_free(buf_out_);
}

CVector FourierOperator::forward(const CVector& img) const {
  if (img.size() != height_ * width_) throw DimensionError("FourierOperator::forward: size mismatch");
  std::lock_guard<std::mutex> lock(mutex_);
  std::copy(img.begin(), img.end(), buf_in_);
  fftw_execute(plan_fwd_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(height_ * width_));
  CVector out(img.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf_out_[i] * scale;
  return out;
}

CVector FourierOperator::inverse(const CVector& freq) const {
  if (freq.size() != height_ * width_) throw DimensionError("FourierOperator::inverse: size mismatch");
  std::lock_guard<std::mutex> lock(mutex_);
  std::copy(freq.begin(), freq.end(), buf_in_);
  fftw_execute(plan_bwd_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(height_ * width_));
  CVector out(freq.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf_out_[i] * scale;
  return out;
}

std::size_t centered_to_uncentered(std::size_t i, std::size_t n) { return (i + n - n / 2) % n; }
std::size_t uncentered_to_centered(std::size_t k, std::size_t n) { return (k + n / 2) % n; }

std::size_t SamplingMask::kept_count() const {
  std::size_t s = 0;
  for (const auto v : kept) s += (v != 0);
  return s;
}

double SamplingMask::achieved_factor() const {
  const std::size_t k = kept_count();
  if (k == 0) throw NumericError("SamplingMask: empty mask");
  return static_cast<double>(height * width) / static_cast<double>(k);
}

SamplingMask make_mask(std::size_t height, std::size_t width, SamplingScheme scheme, double factor,
                       std::uint64_t seed, double center_fraction) {
  if (height == 0 || width == 0) throw ParameterError("make_mask: empty grid");
  if (scheme == SamplingScheme::kUnspecified) throw ParameterError("make_mask: scheme required");
  if (!(factor >= 1.0)) throw ParameterError("make_mask: undersampling factor must be >= 1");
  if (center_fraction < 0.0 || center_fraction > 1.0)
    throw ParameterError("make_mask: center_fraction must lie in [0, 1]");

  SamplingMask mask;
  mask.height = height;
  mask.width = width;
  mask.seed = seed;
  mask.scheme = scheme;
  mask.kept.assign(height * width, 0);

  Rng rng(seed);
  const double hc = static_cast<double>(height / 2);
  const double wc = static_cast<double>(width / 2);

  struct Candidate {
    double key;
    std::size_t index;
  };

  if (scheme == SamplingScheme::kCartesian1D) {
    const auto target_rows = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(height) / factor)));
    const double half_band = std::max(1.0, std::round(center_fraction * static_cast<double>(height) / 2.0));

    std::vector<std::uint8_t> row_kept(height, 0);
    std::size_t forced = 0;
    double dmax = 0.0;
    for (std::size_t r = 0; r < height; ++r)
      dmax = std::max(dmax, std::abs(static_cast<double>(r) - hc));
    std::vector<Candidate> candidates;
    for (std::size_t r = 0; r < height; ++r) {
      const double d = std::abs(static_cast<double>(r) - hc);
      if (d <= half_band) {
        row_kept[r] = 1;
        ++forced;
      } else {
        const double w = std::max(std::pow(1.0 - d / dmax, 4.0), 1e-12);
        candidates.push_back({std::pow(rng.uniform(), 1.0 / w), r});
      }
    }
    if (forced > target_rows)
      throw ParameterError("make_mask: requested factor leaves no room for the fully-kept center");
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.key != b.key) return a.key > b.key;
      return a.index < b.index;
    });
    for (std::size_t k = 0; k < target_rows - forced && k < candidates.size(); ++k)
      row_kept[candidates[k].index] = 1;

    for (std::size_t r = 0; r < height; ++r) {
      if (!row_kept[r]) continue;
      for (std::size_t c = 0; c < width; ++c) mask.kept[r * width + c] = 1;
    }
  } else {
    const auto target = std::max<std::size_t>(
        1,
        static_cast<std::size_t>(std::llround(static_cast<double>(height * width) / factor)));
    const double radius = std::max(1.0, center_fraction * static_cast<double>(std::min(height, width)));

    double dmax = 0.0;
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double dr = static_cast<double>(r) - hc;
        const double dc = static_cast<double>(c) - wc;
        dmax = std::max(dmax, std::hypot(dr, dc));
      }
    }

    std::size_t forced = 0;
    std::vector<Candidate> candidates;
    candidates.reserve(height * width);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double dr = static_cast<double>(r) - hc;
        const double dc = static_cast<double>(c) - wc;
        const double d = std::hypot(dr, dc);
        if (d <= radius) {
          mask.kept[r * width + c] = 1;
          ++forced;
        } else {
          const double w = std::max(std::pow(1.0 - d / dmax, 4.0), 1e-12);
          candidates.push_back({std::pow(rng.uniform(), 1.0 / w), r * width + c});
        }
      }
    }
    if (forced > target)
      throw ParameterError("make_mask: requested factor leaves no room for the fully-kept center");
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.key != b.key) return a.key > b.key;
      return a.index < b.index;
    });
    for (std::size_t k = 0; k < target - forced && k < candidates.size(); ++k)
      mask.kept[candidates[k].index] = 1;
  }

  const double achieved = mask.achieved_factor();
  if (std::abs(achieved - factor) > 0.05 * factor)
    throw ParameterError("make_mask: achieved factor deviates more than 5% from request (grid too small)");
  return mask;
}

FourierSamplingOp::FourierSamplingOp(SamplingMask mask)
    : mask_(std::move(mask)), count_(mask_.kept_count()), fft_(mask_.height, mask_.width) {
  if (count_ == 0) throw ParameterError("FourierSamplingOp: mask keeps no samples");
}

CVector FourierSamplingOp::forward(const Image& y) const {
  if (y.height != mask_.height || y.width != mask_.width)
    throw DimensionError("FourierSamplingOp::forward: image/mask shape mismatch");
  const CVector freq = fft_.forward(y.pixels);
  CVector z;
  z.reserve(count_);
  for (std::size_t r = 0; r < mask_.height; ++r) {
    const std::size_t ur = centered_to_uncentered(r, mask_.height);
    for (std::size_t c = 0; c < mask_.width; ++c) {
      if (!mask_.at(r, c)) continue;
      z.push_back(freq[ur * mask_.width + centered_to_uncentered(c, mask_.width)]);
    }
  }
  return z;
}

CVector FourierSamplingOp::embed(const CVector& z) const {
  if (z.size() != count_) throw DimensionError("FourierSamplingOp: measurement count mismatch");
  CVector freq(mask_.height * mask_.width, Complex(0.0, 0.0));
  std::size_t k = 0;
  for (std::size_t r = 0; r < mask_.height; ++r) {
    const std::size_t ur = centered_to_uncentered(r, mask_.height);
    for (std::size_t c = 0; c < mask_.width; ++c) {
      if (!mask_.at(r, c)) continue;
      freq[ur * mask_.width + centered_to_uncentered(c, mask_.width)] = z[k++];
    }
  }
  return freq;
}

Image FourierSamplingOp::adjoint(const CVector& z) const {
  Image img(mask_.height, mask_.width);
  img.pixels = fft_.inverse(embed(z));
  return img;
}

void write_mask(const std::string& path, const SamplingMask& mask) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_mask: cannot open " + path);
  os << "SOUPMASK v1\n" << mask.height << " " << mask.width << "\n";
  for (std::size_t r = 0; r < mask.height; ++r) {
    for (std::size_t c = 0; c < mask.width; ++c) os.put(mask.at(r, c) ? '1' : '0');
    os.put('\n');
  }
  if (!os) throw IoError("write_mask: write failed for " + path);
}

SamplingMask read_mask(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_mask: cannot open " + path);
  std::string header;
  std::getline(is, header);
  if (header != "SOUPMASK v1") throw IoError("read_mask: bad header in " + path);
  SamplingMask mask;
  if (!(is >> mask.height >> mask.width)) throw IoError("read_mask: bad dimensions in " + path);
  is.ignore();  // newline
  mask.kept.assign(mask.height * mask.width, 0);
  for (std::size_t r = 0; r < mask.height; ++r) {
    std::string line;
    if (!std::getline(is, line) || line.size() < mask.width)
      throw IoError("read_mask: truncated grid in " + path);
    for (std::size_t c = 0; c < mask.width; ++c) {
      if (line[c] == '1') {
        mask.kept[r * mask.width + c] = 1;
      } else if (line[c] != '0') {
        throw IoError("read_mask: invalid character in " + path);
      }
    }
  }
  return mask;
}

void write_kspace(const std::string& path, std::size_t height, std::size_t width,
                  const CVector& z) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_kspace: cannot open " + path);
  os.write("SOUPKSP1", 8);
  detail::write_u32(os, static_cast<std::uint32_t>(height));
  detail::write_u32(os, static_cast<std::uint32_t>(width));
  detail::write_u32(os, static_cast<std::uint32_t>(z.size()));
  for (const Complex& v : z) {
    detail::write_f64(os, v.real());
    detail::write_f64(os, v.imag());
  }
  if (!os) throw IoError("write_kspace: write failed for " + path);
}

KspaceData read_kspace(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_kspace: cannot open " + path);
  detail::expect_magic(is, "SOUPKSP1", "read_kspace " + path);
  KspaceData data;
  data.height = detail::read_u32(is, path);
  data.width = detail::read_u32(is, path);
  const std::uint32_t count = detail::read_u32(is, path);
  data.samples.resize(count);
  for (auto& v : data.samples) {
    const double re = detail::read_f64(is, path);
    const double im = detail::read_f64(is, path);
    v = Complex(re, im);
  }
  return data;
}

}  // namespace soup
