#pragma once

#include <utility>

#include "bbe/box.hpp"
#include "bbe/maps.hpp"

namespace bbe {

/// Output dimensions such that the larger side equals `long_side`, the other
/// scales proportionally (rounded, at least 1).
std::pair<Eigen::Index, Eigen::Index> long_side_dims(Eigen::Index height, Eigen::Index width,
                                                     Eigen::Index long_side);

/// Bilinear resampling with pixel-center alignment, clamped at borders.
ProbMap resize_bilinear(const ProbMap& map, Eigen::Index out_h, Eigen::Index out_w);

/// Resamples an offset field onto a new grid. Each output pixel takes the
/// nearest source pixel's decoded box, maps it through the same affine
/// change of coordinates the resize applies to pixel centers, and re-encodes
/// it against the anchor at the output location. Decoded boxes therefore
/// stay consistent with the resized geometry.
OffsetMap resize_offsets(const OffsetMap& map, Eigen::Index out_h, Eigen::Index out_w,
                         const AnchorConfig& anchor);

}  // namespace bbe
