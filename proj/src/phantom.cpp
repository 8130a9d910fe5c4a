#include "soup/phantom.hpp"

#include <cmath>

#include "soup/errors.hpp"

namespace soup {

namespace {

struct Ellipse {
  double cx, cy;    // center in [-1, 1] coordinates
  double rx, ry;    // semi-axes
  double angle;     // rotation, radians
  double amplitude; // added inside the ellipse
};

constexpr Ellipse kEllipses[] = {
    {0.00, 0.00, 0.72, 0.92, 0.0, 1.00},
    {0.00, -0.02, 0.66, 0.87, 0.0, -0.70},
    {0.22, 0.00, 0.11, 0.31, -0.30, -0.20},
    {-0.22, 0.00, 0.16, 0.41, 0.30, -0.20},
    {0.00, 0.35, 0.21, 0.25, 0.0, 0.35},
    {0.00, 0.10, 0.046, 0.046, 0.0, 0.30},
    {0.00, -0.10, 0.046, 0.046, 0.0, 0.30},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.25},
    {0.00, -0.605, 0.023, 0.023, 0.0, 0.25},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.25},
    {0.45, -0.45, 0.08, 0.12, 0.6, 0.40},
};

// Separable periodic Gaussian blur.
Image blur(const Image& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (double& v : kernel) v /= sum;

  const auto h = static_cast<std::ptrdiff_t>(img.height);
  const auto w = static_cast<std::ptrdiff_t>(img.width);
  const auto wrap = [](std::ptrdiff_t i, std::ptrdiff_t n) { return ((i % n) + n) % n; };

  Image rows(img.height, img.width);
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      Complex acc(0.0, 0.0);
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * img.at(static_cast<std::size_t>(r),
                                           static_cast<std::size_t>(wrap(c + k, w)));
      rows.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  Image out(img.height, img.width);
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      Complex acc(0.0, 0.0);
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[k + radius] * rows.at(static_cast<std::size_t>(wrap(r + k, h)),
                                            static_cast<std::size_t>(c));
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

}  // namespace

Image make_phantom(std::size_t height, std::size_t width, double edge_sigma) {
  if (height == 0 || width == 0) throw ParameterError("make_phantom: empty image");
  if (edge_sigma < 0.0) throw ParameterError("make_phantom: edge_sigma must be >= 0");
  Image img(height, width);
  double peak = 0.0;
  for (std::size_t r = 0; r < height; ++r) {
    const double y = 2.0 * static_cast<double>(r) / static_cast<double>(height - 1 ? height - 1 : 1) - 1.0;
    for (std::size_t c = 0; c < width; ++c) {
      const double x = 2.0 * static_cast<double>(c) / static_cast<double>(width - 1 ? width - 1 : 1) - 1.0;
      double value = 0.0;
      for (const Ellipse& e : kEllipses) {
        const double ca = std::cos(e.angle);
        const double sa = std::sin(e.angle);
        const double dx = x - e.cx;
        const double dy = y - e.cy;
        const double u = (ca * dx + sa * dy) / e.rx;
        const double v = (-sa * dx + ca * dy) / e.ry;
        if (u * u + v * v <= 1.0) value += e.amplitude;
      }
      value = std::max(0.0, value);
      // Smooth low-order phase so the phantom exercises the complex path.
      const double phase = 0.7 * x + 0.4 * y + 0.5 * (x * x - y * y);
      img.at(r, c) = value * Complex(std::cos(phase), std::sin(phase));
      peak = std::max(peak, value);
    }
  }
  if (edge_sigma > 0.0) {
    img = blur(img, edge_sigma);
    peak = peak_magnitude(img);
  }
  if (peak > 0.0) {
    for (Complex& z : img.pixels) z /= peak;
  }
  return img;
}

}  // namespace soup
