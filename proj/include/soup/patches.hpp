#pragma once

#include <cstddef>
#include <vector>

#include "soup/dense_matrix.hpp"
#include "soup/image.hpp"

namespace soup {

// Grid of (possibly overlapping) square patches over a 2-D image. With
// wrap = true the patches that overlap the image boundary continue on the
// opposite side, so every multiple-of-stride corner is valid; with
// wrap = false the corner grid is truncated so patches stay in bounds.
//
// Conventions (part of the serialized-dictionary contract): pixels within a
// patch are vectorized column-major, and patch grid positions are ordered
// row-major over top-left corners (0,0), (0,stride), ...
struct PatchGeometry {
  std::size_t image_height = 0;
  std::size_t image_width = 0;
  std::size_t patch_side = 0;
  std::size_t stride = 1;
  bool wrap = true;

  void validate() const;
  std::size_t patch_dim() const { return patch_side * patch_side; }
  std::size_t grid_rows() const;
  std::size_t grid_cols() const;
  std::size_t patch_count() const { return grid_rows() * grid_cols(); }
};

// Y[:, i] = vectorized patch at grid position i; Y is patch_dim x patch_count.
DenseMatrix extract_patches(const Image& img, const PatchGeometry& geom);

// Adjoint of extraction: adds each column of X back at its source pixels.
Image aggregate_patches(const DenseMatrix& x, const PatchGeometry& geom);

// Per-pixel count of covering patches (the diagonal of the
// aggregate-of-extract operator).
std::vector<double> overlap_weights(const PatchGeometry& geom);

}  // namespace soup
