#include "soup/patches.hpp"

namespace soup {

void PatchGeometry::validate() const {
  if (image_height == 0 || image_width == 0) throw ParameterError("PatchGeometry: empty image");
  if (patch_side == 0) throw ParameterError("PatchGeometry: patch_side must be >= 1");
  if (patch_side > image_height || patch_side > image_width)
    throw ParameterError("PatchGeometry: patch_side exceeds image dimensions");
  if (stride == 0) throw ParameterError("PatchGeometry: stride must be >= 1");
}

namespace {

std::size_t grid_len(std::size_t image_len, std::size_t side, std::size_t stride, bool wrap) {
  if (wrap) return (image_len + stride - 1) / stride;  // corners 0, r, ... < image_len
  return (image_len - side) / stride + 1;              // corners 0, r, ... <= image_len - side
}

}  // namespace

std::size_t PatchGeometry::grid_rows() const { return grid_len(image_height, patch_side, stride, wrap); }
std::size_t PatchGeometry::grid_cols() const { return grid_len(image_width, patch_side, stride, wrap); }

DenseMatrix extract_patches(const Image& img, const PatchGeometry& geom) {
  geom.validate();
  if (img.height != geom.image_height || img.width != geom.image_width)
    throw DimensionError("extract_patches: image does not match geometry");

  const std::size_t side = geom.patch_side;
  DenseMatrix y(geom.patch_dim(), geom.patch_count());
  std::size_t patch = 0;
  for (std::size_t gr = 0; gr < geom.grid_rows(); ++gr) {
    const std::size_t r0 = gr * geom.stride;
    for (std::size_t gc = 0; gc < geom.grid_cols(); ++gc, ++patch) {
      const std::size_t c0 = gc * geom.stride;
      auto col = y.col(patch);
      for (std::size_t pc = 0; pc < side; ++pc) {
        const std::size_t c = (c0 + pc) % geom.image_width;
        for (std::size_t pr = 0; pr < side; ++pr) {
          const std::size_t r = (r0 + pr) % geom.image_height;
          col[pc * side + pr] = img.at(r, c);
        }
      }
    }
  }
  return y;
}

Image aggregate_patches(const DenseMatrix& x, const PatchGeometry& geom) {
  geom.validate();
  if (x.rows() != geom.patch_dim() || x.cols() != geom.patch_count())
    throw DimensionError("aggregate_patches: matrix does not match geometry");

  const std::size_t side = geom.patch_side;
  Image img(geom.image_height, geom.image_width);
  std::size_t patch = 0;
  for (std::size_t gr = 0; gr < geom.grid_rows(); ++gr) {
    const std::size_t r0 = gr * geom.stride;
    for (std::size_t gc = 0; gc < geom.grid_cols(); ++gc, ++patch) {
      const std::size_t c0 = gc * geom.stride;
      const auto col = x.col(patch);
      for (std::size_t pc = 0; pc < side; ++pc) {
        const std::size_t c = (c0 + pc) % geom.image_width;
        for (std::size_t pr = 0; pr < side; ++pr) {
          const std::size_t r = (r0 + pr) % geom.image_height;
          img.at(r, c) += col[pc * side + pr];
        }
      }
    }
  }
  return img;
}

std::vector<double> overlap_weights(const PatchGeometry& geom) {
  geom.validate();
  std::vector<double> w(geom.image_height * geom.image_width, 0.0);
  const std::size_t side = geom.patch_side;
  for (std::size_t gr = 0; gr < geom.grid_rows(); ++gr) {
    const std::size_t r0 = gr * geom.stride;
    for (std::size_t gc = 0; gc < geom.grid_cols(); ++gc) {
      const std::size_t c0 = gc * geom.stride;
      for (std::size_t pc = 0; pc < side; ++pc) {
        const std::size_t c = (c0 + pc) % geom.image_width;
        for (std::size_t pr = 0; pr < side; ++pr) {
          const std::size_t r = (r0 + pr) % geom.image_height;
          w[r * geom.image_width + c] += 1.0;
        }
      }
    }
  }
  return w;
}

}  // namespace soup
