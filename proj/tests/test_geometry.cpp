#include <doctest.h>

#include <cmath>

#include "bbe/box.hpp"
#include "bbe/rng.hpp"
#include "oracles.hpp"

using bbe::AnchorConfig;
using bbe::Box;
using bbe::BoxOffsets;

namespace {

Box random_box(bbe::Rng& rng) {
    return Box{rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0),
               rng.uniform(0.1, 50.0), rng.uniform(0.1, 50.0)};
}

// Multiples of 1/64 keep every sum and difference exact in double.
double dyadic(bbe::Rng& rng) {
    return static_cast<double>(rng.range(-65536, 65536)) / 64.0;
}

Box dyadic_box(bbe::Rng& rng) {
    return Box{dyadic(rng), dyadic(rng),
               static_cast<double>(rng.range(1, 4096)) / 64.0,
               static_cast<double>(rng.range(1, 4096)) / 64.0};
}

}  // namespace

TEST_CASE("iou: identity, disjoint and hand-computed overlap") {
    const Box b{3.0, 4.0, 5.0, 6.0};
    CHECK(bbe::iou(b, b) == doctest::Approx(1.0));

    const Box a1 = Box::from_corners(0, 0, 2, 2);
    const Box a2 = Box::from_corners(4, 4, 6, 6);
    CHECK(bbe::iou(a1, a2) == 0.0);

    // intersection 1, union 4 + 4 - 1 = 7
    const Box c1 = Box::from_corners(0, 0, 2, 2);
    const Box c2 = Box::from_corners(1, 1, 3, 3);
    CHECK(bbe::iou(c1, c2) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(oracle::rasterized_iou(c1, c2) == doctest::Approx(1.0 / 7.0).epsilon(2e-3));
}

TEST_CASE("iou: symmetry and bounds over random pairs") {
    bbe::Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const Box a = random_box(rng);
        const Box b = random_box(rng);
        const double v = bbe::iou(a, b);
        CHECK(v == bbe::iou(b, a));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(bbe::iou(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // 1.0 only for (near-)identical boxes
    bbe::Rng rng2(12);
    for (int i = 0; i < 200; ++i) {
        const Box a = random_box(rng2);
        Box b = a;
        b.cx += 1e-3 * a.w;
        CHECK(bbe::iou(a, b) < 1.0);
    }
}

TEST_CASE("iou agrees with rasterization on random overlapping pairs") {
    bbe::Rng rng(13);
    for (int i = 0; i < 25; ++i) {
        const Box a{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(1, 8), rng.uniform(1, 8)};
        const Box b{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(1, 8), rng.uniform(1, 8)};
        CHECK(bbe::iou(a, b) == doctest::Approx(oracle::rasterized_iou(a, b)).epsilon(5e-3));
    }
}

TEST_CASE("anchor_at: published size and unit anchor") {
    const AnchorConfig cfg{96.0, 1.5};
    const Box a = bbe::anchor_at(100.0, 50.0, cfg);
    CHECK(a.cx == 100.0);
    CHECK(a.cy == 50.0);
    CHECK(a.w == doctest::Approx(96.0 / std::sqrt(1.5)).epsilon(1e-12));
    CHECK(a.h == doctest::Approx(96.0 * std::sqrt(1.5)).epsilon(1e-12));
    CHECK(a.w == doctest::Approx(78.3837).epsilon(1e-4));
    CHECK(a.h == doctest::Approx(117.5755).epsilon(1e-4));

    const Box unit = bbe::anchor_at(0.0, 0.0, AnchorConfig{1.0, 1.0});
    CHECK(unit.cx == 0.0);
    CHECK(unit.cy == 0.0);
    CHECK(unit.w == 1.0);
    CHECK(unit.h == 1.0);
}

TEST_CASE("anchor area equals scale^2 for any aspect") {
    bbe::Rng rng(14);
    for (int i = 0; i < 100; ++i) {
        const AnchorConfig cfg{rng.uniform(1.0, 200.0), rng.uniform(0.2, 5.0)};
        CHECK(cfg.width() * cfg.height() == doctest::Approx(cfg.scale * cfg.scale).epsilon(1e-12));
    }
}

TEST_CASE("encode: identity and hand-computed offsets") {
    const Box anchor{0.0, 0.0, 10.0, 10.0};
    const BoxOffsets zero = bbe::encode(anchor, anchor);
    CHECK(zero.dx == 0.0);
    CHECK(zero.dy == 0.0);
    CHECK(zero.dw == 0.0);
    CHECK(zero.dh == 0.0);

    const Box gt{5.0, -5.0, 20.0, 5.0};
    const BoxOffsets off = bbe::encode(gt, anchor);
    CHECK(off.dx == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(off.dy == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(off.dw == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(off.dh == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("decode: zero offsets give the anchor back, and the frozen inverse") {
    const Box anchor{0.0, 0.0, 10.0, 10.0};
    const Box same = bbe::decode(BoxOffsets{}, anchor);
    CHECK(same.cx == anchor.cx);
    CHECK(same.w == anchor.w);

    const Box g = bbe::decode(BoxOffsets{0.5, -0.5, std::log(2.0), -std::log(2.0)}, anchor);
    CHECK(g.cx == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(g.cy == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(g.w == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(g.h == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("decode rejects non-finite offsets") {
    const Box anchor{0.0, 0.0, 10.0, 10.0};
    CHECK_THROWS_AS(bbe::decode(BoxOffsets{std::nan(""), 0, 0, 0}, anchor),
                    bbe::ValidationError);
    CHECK_THROWS_AS(bbe::decode(BoxOffsets{0, HUGE_VAL, 0, 0}, anchor), bbe::ValidationError);
}

TEST_CASE("encode/decode are inverse bijections on random pairs") {
    bbe::Rng rng(15);
    for (int i = 0; i < 2000; ++i) {
        const Box g = random_box(rng);
        const Box a = random_box(rng);
        const Box back = bbe::decode(bbe::encode(g, a), a);
        CHECK(back.cx == doctest::Approx(g.cx).epsilon(1e-9));
        CHECK(back.cy == doctest::Approx(g.cy).epsilon(1e-9));
        CHECK(back.w == doctest::Approx(g.w).epsilon(1e-9));
        CHECK(back.h == doctest::Approx(g.h).epsilon(1e-9));

        const BoxOffsets o{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-2, 2),
                           rng.uniform(-2, 2)};
        const BoxOffsets back_o = bbe::encode(bbe::decode(o, a), a);
        CHECK(back_o.dx == doctest::Approx(o.dx).epsilon(1e-9));
        CHECK(back_o.dy == doctest::Approx(o.dy).epsilon(1e-9));
        CHECK(back_o.dw == doctest::Approx(o.dw).epsilon(1e-9));
        CHECK(back_o.dh == doctest::Approx(o.dh).epsilon(1e-9));
    }
}

TEST_CASE("offsets are exactly invariant to joint translation and scaling") {
    // Dyadic coordinates and power-of-two scales make the algebra exact in
    // floating point, so the invariance can be asserted bit-for-bit.
    bbe::Rng rng(16);
    for (int i = 0; i < 1000; ++i) {
        const Box g = dyadic_box(rng);
        const Box a = dyadic_box(rng);
        const BoxOffsets base = bbe::encode(g, a);

        const double tx = dyadic(rng), ty = dyadic(rng);
        const Box gt{g.cx + tx, g.cy + ty, g.w, g.h};
        const Box at{a.cx + tx, a.cy + ty, a.w, a.h};
        const BoxOffsets translated = bbe::encode(gt, at);
        CHECK(translated.dx == base.dx);
        CHECK(translated.dy == base.dy);
        CHECK(translated.dw == base.dw);
        CHECK(translated.dh == base.dh);

        const double s = std::ldexp(1.0, static_cast<int>(rng.range(-8, 8)));
        const Box gs{g.cx * s, g.cy * s, g.w * s, g.h * s};
        const Box as{a.cx * s, a.cy * s, a.w * s, a.h * s};
        const BoxOffsets scaled = bbe::encode(gs, as);
        CHECK(scaled.dx == base.dx);
        CHECK(scaled.dy == base.dy);
        CHECK(scaled.dw == base.dw);
        CHECK(scaled.dh == base.dh);
    }
}
