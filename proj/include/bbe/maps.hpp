#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bbe/box.hpp"
#include "bbe/error.hpp"

namespace bbe {

/// Dense row-major 2-D field, one value per pixel.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-pixel person probability in [0, 1].
using ProbMap = Grid<float>;

/// Instance ids, 0 = background. Nonzero ids form a contiguous 1..M range.
using LabelMap = Grid<std::uint32_t>;

/// 0/1 mask. Doubles as the offset-loss validity mask and as instance masks.
using BinaryMask = Grid<std::uint8_t>;

/// Dense H x W x 4 field of anchor-relative offsets, stored pixel-major:
/// row i of `data` holds (dx, dy, dw, dh) for the pixel at flat index i.
template <typename Scalar>
struct OffsetField {
    using Data = Eigen::Array<Scalar, Eigen::Dynamic, 4, Eigen::RowMajor>;

    Eigen::Index height = 0;
    Eigen::Index width = 0;
    Data data;

    static OffsetField zeros(Eigen::Index h, Eigen::Index w) {
        return OffsetField{h, w, Data::Zero(h * w, 4)};
    }

    Eigen::Index pixels() const { return height * width; }
    Eigen::Index flat(Eigen::Index r, Eigen::Index c) const { return r * width + c; }

    BoxOffsets at(Eigen::Index r, Eigen::Index c) const {
        const Eigen::Index i = flat(r, c);
        return BoxOffsets{static_cast<double>(data(i, 0)), static_cast<double>(data(i, 1)),
                          static_cast<double>(data(i, 2)), static_cast<double>(data(i, 3))};
    }

    void set(Eigen::Index r, Eigen::Index c, const BoxOffsets& o) {
        const Eigen::Index i = flat(r, c);
        data(i, 0) = static_cast<Scalar>(o.dx);
        data(i, 1) = static_cast<Scalar>(o.dy);
        data(i, 2) = static_cast<Scalar>(o.dw);
        data(i, 3) = static_cast<Scalar>(o.dh);
    }
};

using OffsetMap = OffsetField<float>;

inline void validate_prob_map(const ProbMap& m) {
    if (!(m >= 0.0f && m <= 1.0f).all() || !m.isFinite().all()) {
        throw ValidationError("probability map has values outside [0, 1]");
    }
}

template <typename Scalar>
void validate_offset_map(const OffsetField<Scalar>& m) {
    if (m.data.rows() != m.height * m.width) {
        throw ValidationError("offset map payload size does not match dimensions");
    }
    if (!m.data.isFinite().all()) {
        throw ValidationError("offset map has non-finite values");
    }
}

inline void validate_binary_mask(const BinaryMask& m) {
    if ((m > 1).any()) {
        throw ValidationError("binary mask has values other than 0/1");
    }
}

/// Checks that nonzero ids are exactly 1..M with no holes.
inline void validate_label_map(const LabelMap& m) {
    const std::uint32_t max_id = m.size() == 0 ? 0 : m.maxCoeff();
    std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        seen[m.data()[i]] = true;
    }
    for (std::uint32_t k = 1; k <= max_id; ++k) {
        if (!seen[k]) {
            throw ValidationError("label map ids are not contiguous: missing id " +
                                  std::to_string(k));
        }
    }
}

}  // namespace bbe
