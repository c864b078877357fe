#include "bbe/rle.hpp"

namespace bbe {

RleMask rle_encode(const BinaryMask& mask) {
    validate_binary_mask(mask);
    RleMask rle;
    rle.height = mask.rows();
    rle.width = mask.cols();
    std::uint8_t current = 0;  // background first
    std::uint32_t run = 0;
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
        for (Eigen::Index r = 0; r < mask.rows(); ++r) {
            const std::uint8_t v = mask(r, c);
            if (v != current) {
                rle.counts.push_back(run);
                run = 0;
                current = v;
            }
            ++run;
        }
    }
    rle.counts.push_back(run);
    return rle;
}

BinaryMask rle_decode(const RleMask& rle) {
    if (rle.height <= 0 || rle.width <= 0) {
        throw FormatError("RLE: dimensions must be positive");
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < rle.counts.size(); ++i) {
        if (rle.counts[i] == 0 && i != 0) {
            throw FormatError("RLE: interior zero run");
        }
        total += rle.counts[i];
    }
    const std::uint64_t expected =
        static_cast<std::uint64_t>(rle.height) * static_cast<std::uint64_t>(rle.width);
    if (total != expected) {
        throw FormatError("RLE: counts sum " + std::to_string(total) +
                          " does not match " + std::to_string(expected) + " pixels");
    }
    BinaryMask mask(rle.height, rle.width);
    Eigen::Index r = 0, c = 0;
    std::uint8_t value = 0;
    for (std::uint32_t count : rle.counts) {
        for (std::uint32_t i = 0; i < count; ++i) {
            mask(r, c) = value;
            if (++r == rle.height) {
                r = 0;
                ++c;
            }
        }
        value ^= 1;
    }
    return mask;
}

namespace {

std::int64_t count_and(const BinaryMask& a, const BinaryMask& b) {
    return ((a > 0) && (b > 0)).count();
}

}  // namespace

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("mask_iou: dimension mismatch");
    }
    const std::int64_t inter = count_and(a, b);
    const std::int64_t uni = ((a > 0) || (b > 0)).count();
    if (uni == 0) {
        throw ValidationError("mask_iou: both masks empty");
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double crowd_overlap(const BinaryMask& a, const BinaryMask& crowd) {
    if (a.rows() != crowd.rows() || a.cols() != crowd.cols()) {
        throw ValidationError("crowd_overlap: dimension mismatch");
    }
    const std::int64_t na = (a > 0).count();
    if (na == 0) {
        throw ValidationError("crowd_overlap: empty mask");
    }
    return static_cast<double>(count_and(a, crowd)) / static_cast<double>(na);
}

}  // namespace bbe
