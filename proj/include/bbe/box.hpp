#pragma once

#include <algorithm>
#include <cmath>

#include "bbe/error.hpp"

namespace bbe {

/// Axis-aligned box in continuous image coordinates, center form.
///
/// The integer pixel at (row r, col c) sits at the continuous point
/// (x = c, y = r) and occupies the unit square
/// [c - 0.5, c + 0.5] x [r - 0.5, r + 0.5]. The tight box of a solid
/// pixel run over columns c0..c1 therefore has cx = (c0 + c1) / 2 and
/// w = c1 - c0 + 1.
struct Box {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double x0() const { return cx - 0.5 * w; }
    double y0() const { return cy - 0.5 * h; }
    double x1() const { return cx + 0.5 * w; }
    double y1() const { return cy + 0.5 * h; }
    double area() const { return w * h; }

    bool valid() const {
        return std::isfinite(cx) && std::isfinite(cy) &&
               std::isfinite(w) && std::isfinite(h) && w > 0.0 && h > 0.0;
    }

    static Box from_corners(double x0, double y0, double x1, double y1) {
        return Box{0.5 * (x0 + x1), 0.5 * (y0 + y1), x1 - x0, y1 - y0};
    }
};

/// Anchor-relative box offsets: scale-invariant center translations plus
/// log-space width/height ratios.
struct BoxOffsets {
    double dx = 0.0;
    double dy = 0.0;
    double dw = 0.0;
    double dh = 0.0;

    bool finite() const {
        return std::isfinite(dx) && std::isfinite(dy) &&
               std::isfinite(dw) && std::isfinite(dh);
    }
};

/// One anchor per pixel, parametrized by area and h/w aspect ratio.
/// width * height == scale^2 for any aspect.
struct AnchorConfig {
    double scale = 96.0;   // sqrt of anchor area, pixels
    double aspect = 1.5;   // height / width

    double width() const { return scale / std::sqrt(aspect); }
    double height() const { return scale * std::sqrt(aspect); }

    bool valid() const {
        return std::isfinite(scale) && std::isfinite(aspect) &&
               scale > 0.0 && aspect > 0.0;
    }
};

/// Intersection-over-union of two valid boxes. 0 when disjoint, symmetric.
/// Clamped to [0, 1]: corner reconstruction can overshoot the union by one
/// ulp for identical boxes.
inline double iou(const Box& a, const Box& b) {
    const double iw = std::min(a.x1(), b.x1()) - std::max(a.x0(), b.x0());
    if (iw <= 0.0) return 0.0;
    const double ih = std::min(a.y1(), b.y1()) - std::max(a.y0(), b.y0());
    if (ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return std::min(1.0, inter / (a.area() + b.area() - inter));
}

/// The anchor box centered at pixel location (x, y).
inline Box anchor_at(double x, double y, const AnchorConfig& cfg) {
    return Box{x, y, cfg.width(), cfg.height()};
}

/// Offsets that carry `anchor` onto `gt`.
inline BoxOffsets encode(const Box& gt, const Box& anchor) {
    return BoxOffsets{(gt.cx - anchor.cx) / anchor.w,
                      (gt.cy - anchor.cy) / anchor.h,
                      std::log(gt.w / anchor.w),
                      std::log(gt.h / anchor.h)};
}

/// Exact inverse of encode. Throws ValidationError on non-finite offsets.
inline Box decode(const BoxOffsets& off, const Box& anchor) {
    if (!off.finite()) {
        throw ValidationError("decode: non-finite box offsets");
    }
    return Box{anchor.cx + off.dx * anchor.w,
               anchor.cy + off.dy * anchor.h,
               anchor.w * std::exp(off.dw),
               anchor.h * std::exp(off.dh)};
}

}  // namespace bbe
