#include "bbe/targets.hpp"

namespace bbe {

Box tight_box(const BinaryMask& mask) {
    Eigen::Index r0 = mask.rows(), r1 = -1, c0 = mask.cols(), c1 = -1;
    for (Eigen::Index r = 0; r < mask.rows(); ++r) {
        for (Eigen::Index c = 0; c < mask.cols(); ++c) {
            if (mask(r, c)) {
                r0 = std::min(r0, r);
                r1 = std::max(r1, r);
                c0 = std::min(c0, c);
                c1 = std::max(c1, c);
            }
        }
    }
    if (r1 < 0) {
        throw ValidationError("tight_box: empty mask");
    }
    return Box{0.5 * static_cast<double>(c0 + c1), 0.5 * static_cast<double>(r0 + r1),
               static_cast<double>(c1 - c0 + 1), static_cast<double>(r1 - r0 + 1)};
}

InstanceAnnotation make_annotation(std::uint32_t id, bool is_crowd, BinaryMask mask) {
    if (id == 0) {
        throw ValidationError("annotation id must be positive");
    }
    validate_binary_mask(mask);
    InstanceAnnotation ann;
    ann.id = id;
    ann.is_crowd = is_crowd;
    ann.box = tight_box(mask);
    ann.mask = std::move(mask);
    return ann;
}

TrainingTargets build_targets(std::span<const InstanceAnnotation> annotations,
                              Eigen::Index height, Eigen::Index width,
                              const AnchorConfig& anchor) {
    if (height <= 0 || width <= 0 || !anchor.valid()) {
        throw ValidationError("build_targets: bad canvas size or anchor config");
    }
    TrainingTargets t;
    t.seg = ProbMap::Zero(height, width);
    t.offsets = OffsetMap::zeros(height, width);
    t.offset_mask = BinaryMask::Zero(height, width);

    for (const auto& ann : annotations) {
        if (ann.mask.rows() != height || ann.mask.cols() != width) {
            throw ValidationError("build_targets: annotation mask does not fit canvas");
        }
        if (!(ann.mask > 0).any()) {
            throw ValidationError("build_targets: empty annotation mask");
        }
    }

    for (const auto& ann : annotations) {
        t.seg = t.seg.max(ann.mask.cast<float>());
        if (ann.is_crowd) continue;

        const Box box = tight_box(ann.mask);
        // dw/dh are constant per instance; only the center offsets vary.
        const double dw = std::log(box.w / anchor.width());
        const double dh = std::log(box.h / anchor.height());
        for (Eigen::Index r = 0; r < height; ++r) {
            for (Eigen::Index c = 0; c < width; ++c) {
                if (!ann.mask(r, c)) continue;
                if (t.offset_mask(r, c)) {
                    throw ValidationError("build_targets: overlapping non-crowd masks");
                }
                t.offset_mask(r, c) = 1;
                t.offsets.set(r, c,
                              BoxOffsets{(box.cx - static_cast<double>(c)) / anchor.width(),
                                         (box.cy - static_cast<double>(r)) / anchor.height(),
                                         dw, dh});
            }
        }
    }
    return t;
}

}  // namespace bbe
