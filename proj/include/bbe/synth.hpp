#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bbe/targets.hpp"

namespace bbe {

/// Synthetic ground truth: disjoint instance masks on a fixed canvas,
/// reproducible from the embedded seed.
struct Scene {
    Eigen::Index height = 0;
    Eigen::Index width = 0;
    std::vector<InstanceAnnotation> instances;
    std::uint64_t seed = 0;
};

enum class ShapeKind {
    Rectangle,
    Ellipse,
};

/// Placement controls. Defaults allow occluding placements: a new shape is
/// carved by the shapes already present, so masks stay disjoint while boxes
/// may overlap. Tightening max_box_iou / min_gap instead rejects crowded
/// placements, yielding scenes whose instances are cleanly separable.
struct SceneOptions {
    Eigen::Index min_extent = 0;  // 0 = derived from canvas (min(h,w)/8)
    Eigen::Index max_extent = 0;  // 0 = derived from canvas (min(h,w)/3)
    double max_box_iou = 1.0;     // reject placements whose tight boxes overlap more
    Eigen::Index min_gap = 0;     // required empty border between masks, pixels
    int max_retries = 64;         // placement attempts per instance
};

/// Places n disjoint shapes. Later shapes are carved by earlier ones when
/// they collide (and no separation constraint is active). Deterministic in
/// the seed. Throws ValidationError when a shape cannot be placed within
/// the retry budget.
Scene generate_scene(Eigen::Index height, Eigen::Index width, int n_instances,
                     ShapeKind kind, std::uint64_t seed, const SceneOptions& options = {});

/// Perturbations applied to the ideal maps. All zero = exact oracle.
struct NoiseSpec {
    double prob_noise_sd = 0.0;    // sd of additive noise on the probability logit
    double offset_noise_sd = 0.0;  // sd of additive noise per offset component
    double flip_rate = 0.0;        // fraction of pixels whose probability flips to 1-p

    bool any() const { return prob_noise_sd > 0.0 || offset_noise_sd > 0.0 || flip_rate > 0.0; }
};

/// The network outputs a perfect model would produce for `scene`, optionally
/// perturbed. With zero noise, prob is exactly 1 on instance pixels and 0
/// elsewhere, and offsets encode each pixel's instance box bit-exactly.
/// `crowd_in_prob` controls whether crowd-only pixels count as person
/// probability 1 (they never receive offsets).
std::pair<ProbMap, OffsetMap> oracle_outputs(const Scene& scene, const NoiseSpec& noise,
                                             const AnchorConfig& anchor, std::uint64_t seed,
                                             bool crowd_in_prob = true);

}  // namespace bbe
