#include "bbe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include <Eigen/Dense>

#include "bbe/grouping.hpp"
#include "bbe/synth.hpp"

namespace bbe {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("fit_linear: need at least two matched points");
    }
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = x[static_cast<std::size_t>(i)];
        design(i, 1) = 1.0;
        target(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
    const double ss_res = (target - design * coef).squaredNorm();
    const double mean = target.mean();
    const double ss_tot = (target.array() - mean).matrix().squaredNorm();
    LinearFit fit;
    fit.slope = coef(0);
    fit.intercept = coef(1);
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

struct SweepPoint {
    ProbMap prob;
    OffsetMap offsets;
    std::vector<Box> boxes;
    GroupingConfig cfg;
    BenchRecord record;
    std::vector<double> samples;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

SweepResult run_sweep(std::span<const Eigen::Index> sizes, std::span<const int> instance_counts,
                      std::uint64_t seed, int repeats) {
    if (repeats < 5) {
        throw ValidationError("run_sweep: repeats must be >= 5");
    }
    const GroupingConfig base_cfg;
    SceneOptions options;
    options.min_gap = 2;
    options.max_box_iou = 0.3;

    std::vector<SweepPoint> points;
    std::uint64_t scene_seed = seed;
    for (Eigen::Index size : sizes) {
        for (int count : instance_counts) {
            // Size shapes so total coverage stays near a quarter of the canvas.
            const double target_area =
                0.25 * static_cast<double>(size) * static_cast<double>(size) /
                std::max(1, count);
            const auto extent = static_cast<Eigen::Index>(std::sqrt(target_area));
            SceneOptions opt = options;
            opt.min_extent = std::max<Eigen::Index>(3, extent - extent / 4);
            opt.max_extent = std::max<Eigen::Index>(opt.min_extent, extent + extent / 4);

            const Scene scene =
                generate_scene(size, size, count, ShapeKind::Rectangle, scene_seed++, opt);
            SweepPoint point;
            point.cfg = base_cfg;
            point.cfg.max_detections = std::max(count, base_cfg.max_detections);
            std::tie(point.prob, point.offsets) =
                oracle_outputs(scene, NoiseSpec{}, point.cfg.anchor, 0);
            const auto global = select_global_boxes(point.prob, point.offsets, point.cfg);
            point.boxes.reserve(global.size());
            for (const ScoredBox& sb : global) point.boxes.push_back(sb.box);

            point.record.height = size;
            point.record.width = size;
            point.record.n_instances = static_cast<int>(point.boxes.size());
            point.record.n_person_pixels =
                (point.prob >= static_cast<float>(point.cfg.seg_threshold)).count();
            point.record.repeats = repeats;
            points.push_back(std::move(point));
        }
    }

    // Repeats are interleaved across points so a transient load burst lands
    // on one sample of many points, not on every sample of one point; the
    // per-point median then discards it. Pass 0 is a discarded warm-up.
    using clock = std::chrono::steady_clock;
    for (int rep = 0; rep <= repeats; ++rep) {
        for (SweepPoint& point : points) {
            const auto start = clock::now();
            volatile std::size_t sink =
                assign_pixels(point.prob, point.offsets, point.boxes, point.cfg)
                    .detections.size();
            (void)sink;
            const auto stop = clock::now();
            if (rep > 0) {
                point.samples.push_back(std::chrono::duration<double>(stop - start).count());
            }
        }
    }

    SweepResult result;
    std::vector<double> xs, ys;
    for (SweepPoint& point : points) {
        point.record.wall_time = median(std::move(point.samples));
        xs.push_back(static_cast<double>(point.record.n_person_pixels) *
                     point.record.n_instances);
        ys.push_back(point.record.wall_time);
        result.records.push_back(point.record);
    }
    result.fit = fit_linear(xs, ys);
    return result;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
    out << "height,width,n_instances,n_person_pixels,wall_time,repeats\n";
    for (const BenchRecord& r : records) {
        out << r.height << ',' << r.width << ',' << r.n_instances << ','
            << r.n_person_pixels << ',' << r.wall_time << ',' << r.repeats << '\n';
    }
}

}  // namespace bbe
