#include "bbe/synth.hpp"

#include <algorithm>
#include <cmath>

#include "bbe/rng.hpp"

namespace bbe {

namespace {

BinaryMask draw_shape(ShapeKind kind, Eigen::Index canvas_h, Eigen::Index canvas_w,
                      Eigen::Index r0, Eigen::Index c0, Eigen::Index sh, Eigen::Index sw) {
    BinaryMask mask = BinaryMask::Zero(canvas_h, canvas_w);
    if (kind == ShapeKind::Rectangle) {
        mask.block(r0, c0, sh, sw).setConstant(1);
        return mask;
    }
    // Ellipse inscribed in the placement rectangle, sampled at pixel centers.
    const double cy = static_cast<double>(r0) + 0.5 * static_cast<double>(sh - 1);
    const double cx = static_cast<double>(c0) + 0.5 * static_cast<double>(sw - 1);
    const double ry = std::max(0.5, 0.5 * static_cast<double>(sh));
    const double rx = std::max(0.5, 0.5 * static_cast<double>(sw));
    for (Eigen::Index r = r0; r < r0 + sh; ++r) {
        for (Eigen::Index c = c0; c < c0 + sw; ++c) {
            const double dy = (static_cast<double>(r) - cy) / ry;
            const double dx = (static_cast<double>(c) - cx) / rx;
            if (dy * dy + dx * dx <= 1.0) mask(r, c) = 1;
        }
    }
    return mask;
}

bool gap_clear(const BinaryMask& occupancy, const BinaryMask& candidate, Eigen::Index gap) {
    const Eigen::Index h = occupancy.rows(), w = occupancy.cols();
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < w; ++c) {
            if (!candidate(r, c)) continue;
            const Eigen::Index r0 = std::max<Eigen::Index>(0, r - gap);
            const Eigen::Index r1 = std::min(h - 1, r + gap);
            const Eigen::Index c0 = std::max<Eigen::Index>(0, c - gap);
            const Eigen::Index c1 = std::min(w - 1, c + gap);
            if ((occupancy.block(r0, c0, r1 - r0 + 1, c1 - c0 + 1) > 0).any()) return false;
        }
    }
    return true;
}

}  // namespace

Scene generate_scene(Eigen::Index height, Eigen::Index width, int n_instances,
                     ShapeKind kind, std::uint64_t seed, const SceneOptions& options) {
    if (height <= 0 || width <= 0 || n_instances < 0) {
        throw ValidationError("generate_scene: bad canvas size or instance count");
    }
    const Eigen::Index side = std::min(height, width);
    Eigen::Index min_ext = options.min_extent > 0 ? options.min_extent : std::max<Eigen::Index>(4, side / 8);
    Eigen::Index max_ext = options.max_extent > 0 ? options.max_extent : std::max(min_ext, side / 3);
    min_ext = std::min(min_ext, side);
    max_ext = std::min(std::max(max_ext, min_ext), side);

    const bool separated = options.min_gap > 0 || options.max_box_iou < 1.0;

    Scene scene;
    scene.height = height;
    scene.width = width;
    scene.seed = seed;

    Rng rng(seed);
    BinaryMask occupancy = BinaryMask::Zero(height, width);

    for (int i = 0; i < n_instances; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < options.max_retries && !placed; ++attempt) {
            const auto sh = static_cast<Eigen::Index>(rng.range(min_ext, max_ext));
            const auto sw = static_cast<Eigen::Index>(rng.range(min_ext, max_ext));
            const auto r0 = static_cast<Eigen::Index>(rng.range(0, height - sh));
            const auto c0 = static_cast<Eigen::Index>(rng.range(0, width - sw));
            BinaryMask mask = draw_shape(kind, height, width, r0, c0, sh, sw);

            if (separated) {
                if (!gap_clear(occupancy, mask, std::max<Eigen::Index>(1, options.min_gap))) {
                    continue;
                }
            } else {
                // Occlusion: shapes already placed carve the newcomer.
                mask = (occupancy > 0).select(BinaryMask::Zero(height, width), mask);
                if (!(mask > 0).any()) continue;
            }

            if (options.max_box_iou < 1.0) {
                const Box candidate_box = tight_box(mask);
                const bool too_close =
                    std::any_of(scene.instances.begin(), scene.instances.end(),
                                [&](const InstanceAnnotation& ann) {
                                    return iou(candidate_box, ann.box) > options.max_box_iou;
                                });
                if (too_close) continue;
            }

            occupancy = occupancy.max(mask);
            scene.instances.push_back(
                make_annotation(static_cast<std::uint32_t>(i + 1), false, std::move(mask)));
            placed = true;
        }
        if (!placed) {
            throw ValidationError("generate_scene: could not place instance " +
                                  std::to_string(i + 1) + " within retry budget");
        }
    }
    return scene;
}

std::pair<ProbMap, OffsetMap> oracle_outputs(const Scene& scene, const NoiseSpec& noise,
                                             const AnchorConfig& anchor, std::uint64_t seed,
                                             bool crowd_in_prob) {
    if (noise.prob_noise_sd < 0.0 || noise.offset_noise_sd < 0.0 || noise.flip_rate < 0.0) {
        throw ValidationError("oracle_outputs: noise magnitudes must be nonnegative");
    }
    TrainingTargets targets =
        build_targets(scene.instances, scene.height, scene.width, anchor);

    ProbMap prob = std::move(targets.seg);
    OffsetMap offsets = std::move(targets.offsets);

    if (!crowd_in_prob) {
        // Crowd-only pixels are segmented but carry no offsets.
        prob = (targets.offset_mask == 0).select(ProbMap::Zero(scene.height, scene.width), prob);
    }

    if (noise.any()) {
        Rng rng(seed);
        if (noise.prob_noise_sd > 0.0 || noise.flip_rate > 0.0) {
            for (Eigen::Index i = 0; i < prob.size(); ++i) {
                double p = static_cast<double>(prob.data()[i]);
                if (noise.prob_noise_sd > 0.0) {
                    const double clamped = std::clamp(p, 1e-6, 1.0 - 1e-6);
                    const double z =
                        std::log(clamped / (1.0 - clamped)) + rng.normal(0.0, noise.prob_noise_sd);
                    p = 1.0 / (1.0 + std::exp(-z));
                }
                if (noise.flip_rate > 0.0 && rng.uniform01() < noise.flip_rate) {
                    p = 1.0 - p;
                }
                prob.data()[i] = static_cast<float>(std::clamp(p, 0.0, 1.0));
            }
        }
        if (noise.offset_noise_sd > 0.0) {
            for (Eigen::Index i = 0; i < offsets.data.rows(); ++i) {
                for (int k = 0; k < 4; ++k) {
                    offsets.data(i, k) +=
                        static_cast<float>(rng.normal(0.0, noise.offset_noise_sd));
                }
            }
        }
    }
    return {std::move(prob), std::move(offsets)};
}

}  // namespace bbe
