// Command-line surface for the pixel-grouping pipeline.
//
// Subcommands: synth, targets, group, eval, overlay, bench.
// Exit codes: 0 success, 1 I/O failure, 2 validation or format failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbe/bench.hpp"
#include "bbe/dten.hpp"
#include "bbe/eval.hpp"
#include "bbe/grouping.hpp"
#include "bbe/overlay.hpp"
#include "bbe/resize.hpp"
#include "bbe/scene_io.hpp"
#include "bbe/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;

struct GroupFlags {
    double t_c = 0.6;
    double nms_iou = 0.4;
    double t_iou = 0.5;
    int max_det = 20;
    double anchor_scale = 96.0;
    double anchor_aspect = 1.5;
};

void add_anchor_flags(CLI::App* cmd, GroupFlags& flags) {
    cmd->add_option("--anchor-scale", flags.anchor_scale, "Anchor scale (sqrt of area), px")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--anchor-aspect", flags.anchor_aspect, "Anchor aspect ratio (h/w)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_grouping_flags(CLI::App* cmd, GroupFlags& flags) {
    cmd->add_option("--tc", flags.t_c, "Peak confidence threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--nms-iou", flags.nms_iou, "NMS IoU threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--tiou", flags.t_iou, "Pixel assignment IoU threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--max-det", flags.max_det, "Maximum detections")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_anchor_flags(cmd, flags);
}

bbe::GroupingConfig to_config(const GroupFlags& flags) {
    bbe::GroupingConfig cfg;
    cfg.t_c = flags.t_c;
    cfg.nms_iou = flags.nms_iou;
    cfg.t_iou = flags.t_iou;
    cfg.max_detections = flags.max_det;
    cfg.anchor = bbe::AnchorConfig{flags.anchor_scale, flags.anchor_aspect};
    return cfg;
}

std::vector<Eigen::Index> parse_index_list(const std::vector<std::string>& items) {
    std::vector<Eigen::Index> out;
    for (const auto& s : items) out.push_back(static_cast<Eigen::Index>(std::stoll(s)));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Bottom-up person instance grouping from dense box embeddings"};
    app.require_subcommand(1);

    // --- synth ---------------------------------------------------------
    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic scene and the ideal network outputs for it");
    Eigen::Index s_height = 256, s_width = 256;
    int s_instances = 4;
    std::uint64_t s_seed = 1;
    std::string s_shape = "rectangle";
    bbe::NoiseSpec s_noise;
    bbe::SceneOptions s_options;
    GroupFlags s_anchor;
    std::string s_scene_path, s_prob_path, s_offsets_path;
    synth->add_option("--height", s_height)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--width", s_width)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--instances", s_instances, "Number of instances")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--seed", s_seed)->capture_default_str();
    synth->add_option("--shape", s_shape, "Shape kind")
        ->check(CLI::IsMember({"rectangle", "ellipse"}))
        ->capture_default_str();
    synth->add_option("--prob-noise", s_noise.prob_noise_sd, "Probability logit noise sd")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--offset-noise", s_noise.offset_noise_sd, "Offset noise sd")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--flip-rate", s_noise.flip_rate, "Pixel flip probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--min-extent", s_options.min_extent, "Min shape extent, px (0 = auto)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--max-extent", s_options.max_extent, "Max shape extent, px (0 = auto)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--max-box-iou", s_options.max_box_iou,
                      "Reject placements whose boxes overlap more than this")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--min-gap", s_options.min_gap, "Min empty pixels between masks")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_anchor_flags(synth, s_anchor);
    synth->add_option("--scene", s_scene_path, "Output scene JSON")->required();
    synth->add_option("--prob", s_prob_path, "Output probability DTEN")->required();
    synth->add_option("--offsets", s_offsets_path, "Output offsets DTEN")->required();

    // --- targets -------------------------------------------------------
    auto* targets = app.add_subcommand("targets",
                                       "Build dense training targets from a scene");
    std::string t_scene_path, t_seg_path, t_offsets_path, t_mask_path;
    GroupFlags t_anchor;
    targets->add_option("--scene", t_scene_path, "Input scene JSON")->required();
    add_anchor_flags(targets, t_anchor);
    targets->add_option("--seg", t_seg_path, "Output segmentation DTEN")->required();
    targets->add_option("--offsets", t_offsets_path, "Output offsets DTEN")->required();
    targets->add_option("--mask", t_mask_path, "Output offset-validity DTEN")->required();

    // --- group ---------------------------------------------------------
    auto* group = app.add_subcommand(
        "group", "Group person pixels into instances from probability + offset maps");
    std::string g_prob_path, g_offsets_path, g_instances_path, g_labels_path;
    GroupFlags g_flags;
    Eigen::Index g_resize = 0;
    group->add_option("--prob", g_prob_path, "Input probability DTEN")->required();
    group->add_option("--offsets", g_offsets_path, "Input offsets DTEN")->required();
    add_grouping_flags(group, g_flags);
    group->add_option("--resize-long-side", g_resize,
                      "Resample maps so the larger dimension has this size before grouping")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    group->add_option("--instances", g_instances_path, "Output detections JSON")->required();
    group->add_option("--labels", g_labels_path, "Output label-map DTEN")->required();

    // --- eval ----------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "Score detections against a scene");
    std::string e_instances_path, e_scene_path, e_out_path;
    eval->add_option("--instances", e_instances_path, "Input detections JSON")->required();
    eval->add_option("--scene", e_scene_path, "Input scene JSON")->required();
    eval->add_option("--out", e_out_path, "Output metrics JSON")->required();

    // --- overlay -------------------------------------------------------
    auto* overlay = app.add_subcommand("overlay", "Render a label map as a PPM raster");
    std::string o_labels_path, o_out_path;
    overlay->add_option("--labels", o_labels_path, "Input label-map DTEN")->required();
    overlay->add_option("--out", o_out_path, "Output PPM (P6)")->required();

    // --- bench ---------------------------------------------------------
    auto* bench = app.add_subcommand(
        "bench", "Time the assignment kernel over a size/instance sweep");
    std::vector<std::string> b_sizes{"192", "256", "320", "384"};
    std::vector<int> b_counts{24, 32, 40};
    std::uint64_t b_seed = 1;
    int b_repeats = 5;
    std::string b_out_path;
    bench->add_option("--sizes", b_sizes, "Square canvas sizes")->capture_default_str();
    bench->add_option("--instances", b_counts, "Instance counts")->capture_default_str();
    bench->add_option("--seed", b_seed)->capture_default_str();
    bench->add_option("--repeats", b_repeats, "Timed repeats per point (median)")
        ->check(CLI::Range(5, 1000))
        ->capture_default_str();
    bench->add_option("--out", b_out_path, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (synth->parsed()) {
        const auto kind = s_shape == "ellipse" ? bbe::ShapeKind::Ellipse
                                               : bbe::ShapeKind::Rectangle;
        const bbe::Scene scene =
            bbe::generate_scene(s_height, s_width, s_instances, kind, s_seed, s_options);
        const bbe::AnchorConfig anchor{s_anchor.anchor_scale, s_anchor.anchor_aspect};
        const auto [prob, offsets] = bbe::oracle_outputs(scene, s_noise, anchor, s_seed);
        bbe::save_scene_json(s_scene_path, scene);
        bbe::save_dten(s_prob_path, prob);
        bbe::save_dten(s_offsets_path, offsets);
    } else if (targets->parsed()) {
        const bbe::Scene scene = bbe::load_scene_json(t_scene_path);
        const bbe::AnchorConfig anchor{t_anchor.anchor_scale, t_anchor.anchor_aspect};
        const bbe::TrainingTargets tt =
            bbe::build_targets(scene.instances, scene.height, scene.width, anchor);
        bbe::save_dten(t_seg_path, tt.seg);
        bbe::save_dten(t_offsets_path, tt.offsets);
        bbe::save_dten(t_mask_path, tt.offset_mask);
    } else if (group->parsed()) {
        bbe::ProbMap prob = bbe::load_prob_map(g_prob_path);
        bbe::OffsetMap offsets = bbe::load_offset_map(g_offsets_path);
        const bbe::GroupingConfig cfg = to_config(g_flags);
        if (prob.rows() != offsets.height || prob.cols() != offsets.width) {
            throw bbe::ValidationError("probability and offset map shapes differ");
        }
        if (g_resize > 0) {
            const auto [out_h, out_w] = bbe::long_side_dims(prob.rows(), prob.cols(), g_resize);
            prob = bbe::resize_bilinear(prob, out_h, out_w);
            offsets = bbe::resize_offsets(offsets, out_h, out_w, cfg.anchor);
        }
        const bbe::GroupingResult result = bbe::group(prob, offsets, cfg);
        bbe::save_predictions_json(g_instances_path, bbe::predictions_from_grouping(result));
        bbe::save_dten(g_labels_path, result.labels);
    } else if (eval->parsed()) {
        const bbe::Scene scene = bbe::load_scene_json(e_scene_path);
        const auto predictions =
            bbe::load_predictions_json(e_instances_path, scene.height, scene.width);
        bbe::save_metrics_json(e_out_path, bbe::evaluate(predictions, scene));
    } else if (overlay->parsed()) {
        bbe::save_ppm(o_out_path, bbe::load_label_map(o_labels_path));
    } else if (bench->parsed()) {
        const auto sizes = parse_index_list(b_sizes);
        const bbe::SweepResult sweep = bbe::run_sweep(sizes, b_counts, b_seed, b_repeats);
        std::ofstream csv(b_out_path, std::ios::trunc);
        if (!csv) throw bbe::IoError("cannot open for writing: " + b_out_path);
        bbe::write_bench_csv(csv, sweep.records);
        if (!csv) throw bbe::IoError("write failed: " + b_out_path);
        std::cout << "fit: wall_time = " << sweep.fit.slope << " * (Np*M) + "
                  << sweep.fit.intercept << "  (R^2 = " << sweep.fit.r2 << ")\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bbe::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const bbe::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}
