#pragma once

#include <cstdint>
#include <vector>

#include "bbe/maps.hpp"

namespace bbe {

/// Column-major run-length encoded binary mask (COCO counts convention).
/// Runs alternate background/foreground starting with background; a mask
/// that begins with foreground carries a leading zero run. sum(counts)
/// always equals height * width.
struct RleMask {
    Eigen::Index height = 0;
    Eigen::Index width = 0;
    std::vector<std::uint32_t> counts;

    bool operator==(const RleMask&) const = default;
};

RleMask rle_encode(const BinaryMask& mask);

/// Inverse of rle_encode. Throws FormatError when the counts do not sum to
/// height * width or contain an interior zero run.
BinaryMask rle_decode(const RleMask& rle);

/// |a & b| / |a | b|. Throws ValidationError on dimension mismatch or when
/// both masks are empty (the ratio is undefined).
double mask_iou(const BinaryMask& a, const BinaryMask& b);

/// COCO crowd overlap: |a & crowd| / |a|. Used when matching against
/// ignore regions. Throws ValidationError when `a` is empty.
double crowd_overlap(const BinaryMask& a, const BinaryMask& crowd);

}  // namespace bbe
