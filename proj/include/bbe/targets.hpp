#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bbe/box.hpp"
#include "bbe/maps.hpp"

namespace bbe {

/// One ground-truth instance: a full-canvas 0/1 mask plus its tight box.
/// The box is always recomputed from the mask, never trusted from input.
struct InstanceAnnotation {
    std::uint32_t id = 0;
    bool is_crowd = false;
    BinaryMask mask;
    Box box;
};

/// Tight axis-aligned bounds of the nonzero pixels. Throws ValidationError
/// when the mask is empty.
Box tight_box(const BinaryMask& mask);

/// Builds an annotation with a validated mask and a recomputed tight box.
InstanceAnnotation make_annotation(std::uint32_t id, bool is_crowd, BinaryMask mask);

/// Dense supervision for one image: a 0/1 segmentation target, per-pixel
/// box offsets, and the mask restricting the offset loss to pixels that
/// belong to a (non-crowd) instance.
struct TrainingTargets {
    ProbMap seg;
    OffsetMap offsets;
    BinaryMask offset_mask;
};

/// Per-pixel targets from instance annotations.
///
/// seg = 1 on every annotated pixel, crowd regions included. Offsets encode
/// the owning instance's tight box against the anchor at each pixel, and are
/// supervised (offset_mask = 1) only on non-crowd instance pixels; crowd-only
/// pixels keep seg = 1 with no offset supervision. Background stays zero
/// everywhere.
///
/// Throws ValidationError on mask dimension mismatches, empty masks, or
/// overlapping non-crowd masks.
TrainingTargets build_targets(std::span<const InstanceAnnotation> annotations,
                              Eigen::Index height, Eigen::Index width,
                              const AnchorConfig& anchor);

}  // namespace bbe
