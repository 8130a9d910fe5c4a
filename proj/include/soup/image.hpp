#pragma once

#include <cstddef>

#include "soup/complex_ops.hpp"
#include "soup/errors.hpp"

namespace soup {

// Complex 2-D image, row-major storage.
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  CVector pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w) : height(h), width(w), pixels(h * w, Complex(0.0, 0.0)) {}

  Complex& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }

  std::size_t size() const { return pixels.size(); }
};

inline double norm2(const Image& img) { return norm2(img.pixels); }

inline double norm2_diff(const Image& a, const Image& b) {
  if (a.height != b.height || a.width != b.width) throw DimensionError("image diff: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) s += std::norm(a.pixels[i] - b.pixels[i]);
  return std::sqrt(s);
}

inline double peak_magnitude(const Image& img) {
  double m = 0.0;
  for (const Complex& z : img.pixels) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace soup
