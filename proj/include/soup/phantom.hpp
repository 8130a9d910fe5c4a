#pragma once

#include "soup/image.hpp"

namespace soup {

// Piecewise-smooth complex test image: overlapping ellipses of constant
// magnitude on a dark background, modulated by a smooth spatial phase map,
// normalized to unit peak magnitude. Deterministic.
//
// edge_sigma > 0 softens the ellipse boundaries with a periodic Gaussian
// blur of that radius (in pixels) before normalization. Crisp edges put a
// lot of energy into coherent aliasing ghosts under Cartesian
// undersampling, so the smoothed variant is the better reconstruction test
// subject.
Image make_phantom(std::size_t height, std::size_t width, double edge_sigma = 0.0);

}  // namespace soup
