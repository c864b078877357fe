#include "bbe/resize.hpp"

#include <algorithm>
#include <cmath>

namespace bbe {

std::pair<Eigen::Index, Eigen::Index> long_side_dims(Eigen::Index height, Eigen::Index width,
                                                     Eigen::Index long_side) {
    if (height <= 0 || width <= 0 || long_side <= 0) {
        throw ValidationError("long_side_dims: dimensions must be positive");
    }
    const double s = static_cast<double>(long_side) / static_cast<double>(std::max(height, width));
    auto scaled = [&](Eigen::Index v) {
        return std::max<Eigen::Index>(
            1, static_cast<Eigen::Index>(std::llround(static_cast<double>(v) * s)));
    };
    if (height >= width) return {long_side, scaled(width)};
    return {scaled(height), long_side};
}

namespace {

// Source coordinate of an output pixel center under pixel-center alignment.
double src_coord(Eigen::Index out_idx, Eigen::Index out_n, Eigen::Index in_n) {
    const double scale = static_cast<double>(in_n) / static_cast<double>(out_n);
    return (static_cast<double>(out_idx) + 0.5) * scale - 0.5;
}

}  // namespace

ProbMap resize_bilinear(const ProbMap& map, Eigen::Index out_h, Eigen::Index out_w) {
    if (out_h <= 0 || out_w <= 0) {
        throw ValidationError("resize_bilinear: output dimensions must be positive");
    }
    ProbMap out(out_h, out_w);
    for (Eigen::Index r = 0; r < out_h; ++r) {
        const double sy = std::clamp(src_coord(r, out_h, map.rows()), 0.0,
                                     static_cast<double>(map.rows() - 1));
        const auto y0 = static_cast<Eigen::Index>(std::floor(sy));
        const Eigen::Index y1 = std::min(y0 + 1, map.rows() - 1);
        const double fy = sy - static_cast<double>(y0);
        for (Eigen::Index c = 0; c < out_w; ++c) {
            const double sx = std::clamp(src_coord(c, out_w, map.cols()), 0.0,
                                         static_cast<double>(map.cols() - 1));
            const auto x0 = static_cast<Eigen::Index>(std::floor(sx));
            const Eigen::Index x1 = std::min(x0 + 1, map.cols() - 1);
            const double fx = sx - static_cast<double>(x0);
            const double top = (1.0 - fx) * map(y0, x0) + fx * map(y0, x1);
            const double bottom = (1.0 - fx) * map(y1, x0) + fx * map(y1, x1);
            out(r, c) = static_cast<float>((1.0 - fy) * top + fy * bottom);
        }
    }
    return out;
}

OffsetMap resize_offsets(const OffsetMap& map, Eigen::Index out_h, Eigen::Index out_w,
                         const AnchorConfig& anchor) {
    if (out_h <= 0 || out_w <= 0) {
        throw ValidationError("resize_offsets: output dimensions must be positive");
    }
    const double sy = static_cast<double>(out_h) / static_cast<double>(map.height);
    const double sx = static_cast<double>(out_w) / static_cast<double>(map.width);
    OffsetMap out = OffsetMap::zeros(out_h, out_w);
    for (Eigen::Index r = 0; r < out_h; ++r) {
        const auto src_r = static_cast<Eigen::Index>(std::clamp<double>(
            std::llround(src_coord(r, out_h, map.height)), 0.0,
            static_cast<double>(map.height - 1)));
        for (Eigen::Index c = 0; c < out_w; ++c) {
            const auto src_c = static_cast<Eigen::Index>(std::clamp<double>(
                std::llround(src_coord(c, out_w, map.width)), 0.0,
                static_cast<double>(map.width - 1)));
            const Box src_box = decode(map.at(src_r, src_c),
                                       anchor_at(static_cast<double>(src_c),
                                                 static_cast<double>(src_r), anchor));
            const Box scaled{(src_box.cx + 0.5) * sx - 0.5, (src_box.cy + 0.5) * sy - 0.5,
                             src_box.w * sx, src_box.h * sy};
            out.set(r, c,
                    encode(scaled, anchor_at(static_cast<double>(c), static_cast<double>(r),
                                             anchor)));
        }
    }
    return out;
}

}  // namespace bbe
