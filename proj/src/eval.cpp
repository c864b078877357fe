#include "bbe/eval.hpp"

#include <algorithm>
#include <numeric>

namespace bbe {

std::vector<PredictionMask> predictions_from_grouping(const GroupingResult& result) {
    std::vector<PredictionMask> predictions;
    predictions.reserve(result.detections.size());
    for (const Detection& det : result.detections) {
        BinaryMask mask = (result.labels == det.instance_id).cast<std::uint8_t>();
        predictions.push_back(PredictionMask{det.score, det.box, rle_encode(mask)});
    }
    return predictions;
}

std::vector<double> coco_iou_thresholds() {
    std::vector<double> t;
    for (int i = 0; i <= 9; ++i) t.push_back(0.5 + 0.05 * i);
    return t;
}

std::vector<int> coco_detection_caps() { return {1, 10, 100}; }

namespace {

struct MatchOutcome {
    // Per sorted prediction: 1 = true positive, 0 = false positive, -1 = ignored.
    std::vector<int> status;
};

/// Greedy matching at one threshold given precomputed IoU tables.
/// `iou_gt(i, j)`: prediction i vs non-crowd GT j; `crowd(i, j)`: overlap of
/// prediction i with crowd region j.
MatchOutcome match_at(const Grid<double>& iou_gt, const Grid<double>& crowd, double threshold) {
    const Eigen::Index n_pred = iou_gt.rows();
    const Eigen::Index n_gt = iou_gt.cols();
    MatchOutcome out;
    out.status.assign(static_cast<std::size_t>(n_pred), 0);
    std::vector<char> taken(static_cast<std::size_t>(n_gt), 0);
    for (Eigen::Index i = 0; i < n_pred; ++i) {
        double best = threshold;
        Eigen::Index best_gt = -1;
        for (Eigen::Index j = 0; j < n_gt; ++j) {
            if (taken[static_cast<std::size_t>(j)]) continue;
            const double v = iou_gt(i, j);
            if (v >= best && (best_gt < 0 || v > best)) {
                best = v;
                best_gt = j;
            }
        }
        if (best_gt >= 0) {
            taken[static_cast<std::size_t>(best_gt)] = 1;
            out.status[static_cast<std::size_t>(i)] = 1;
            continue;
        }
        for (Eigen::Index j = 0; j < crowd.cols(); ++j) {
            if (crowd(i, j) >= threshold) {
                out.status[static_cast<std::size_t>(i)] = -1;
                break;
            }
        }
    }
    return out;
}

/// 101-point interpolated AP from per-prediction match status.
double average_precision(const std::vector<int>& status, std::int64_t n_gt) {
    if (n_gt == 0) return 0.0;
    std::vector<double> recalls, precisions;
    std::int64_t tp = 0, fp = 0;
    for (int s : status) {
        if (s < 0) continue;  // ignored predictions occupy no PR point
        if (s == 1) ++tp; else ++fp;
        recalls.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
        precisions.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    }
    if (recalls.empty()) return 0.0;
    // Suffix max of precision; recalls are nondecreasing along the scan.
    std::vector<double> envelope(precisions.size());
    double running = 0.0;
    for (std::size_t i = precisions.size(); i-- > 0;) {
        running = std::max(running, precisions[i]);
        envelope[i] = running;
    }
    double total = 0.0;
    std::size_t idx = 0;
    for (int r = 0; r <= 100; ++r) {
        const double target = static_cast<double>(r) / 100.0;
        while (idx < recalls.size() && recalls[idx] < target) ++idx;
        if (idx == recalls.size()) break;  // unreachable recall contributes 0
        total += envelope[idx];
    }
    return total / 101.0;
}

}  // namespace

EvalResult evaluate(std::span<const PredictionMask> predictions, const Scene& ground_truth,
                    std::span<const double> iou_thresholds, std::span<const int> max_detections) {
    std::vector<BinaryMask> pred_masks;
    pred_masks.reserve(predictions.size());
    for (const PredictionMask& p : predictions) {
        if (p.mask.height != ground_truth.height || p.mask.width != ground_truth.width) {
            throw ValidationError("evaluate: prediction mask dimensions do not match scene");
        }
        pred_masks.push_back(rle_decode(p.mask));
    }

    std::vector<const InstanceAnnotation*> gts, crowds;
    for (const InstanceAnnotation& ann : ground_truth.instances) {
        (ann.is_crowd ? crowds : gts).push_back(&ann);
    }
    const auto n_gt = static_cast<std::int64_t>(gts.size());

    // Score-descending evaluation order, stable on ties.
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].score > predictions[b].score;
    });

    const auto n_pred = static_cast<Eigen::Index>(predictions.size());
    Grid<double> iou_table(n_pred, static_cast<Eigen::Index>(gts.size()));
    Grid<double> crowd_table(n_pred, static_cast<Eigen::Index>(crowds.size()));
    for (Eigen::Index i = 0; i < n_pred; ++i) {
        const BinaryMask& pm = pred_masks[order[static_cast<std::size_t>(i)]];
        const bool pm_empty = !(pm > 0).any();
        for (std::size_t j = 0; j < gts.size(); ++j) {
            iou_table(i, static_cast<Eigen::Index>(j)) =
                pm_empty ? 0.0 : mask_iou(pm, gts[j]->mask);
        }
        for (std::size_t j = 0; j < crowds.size(); ++j) {
            crowd_table(i, static_cast<Eigen::Index>(j)) =
                pm_empty ? 0.0 : crowd_overlap(pm, crowds[j]->mask);
        }
    }

    EvalResult result;
    std::vector<double> recall_by_cap(max_detections.size(), 0.0);
    for (double threshold : iou_thresholds) {
        const MatchOutcome outcome = match_at(iou_table, crowd_table, threshold);
        result.ap.emplace_back(threshold, average_precision(outcome.status, n_gt));

        for (std::size_t k = 0; k < max_detections.size(); ++k) {
            const auto cap = static_cast<std::size_t>(std::max(0, max_detections[k]));
            std::int64_t tp = 0;
            for (std::size_t i = 0; i < outcome.status.size() && i < cap; ++i) {
                if (outcome.status[i] == 1) ++tp;
            }
            recall_by_cap[k] +=
                n_gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(n_gt);
        }
    }

    const double nt = static_cast<double>(iou_thresholds.size());
    result.ap_mean = 0.0;
    for (const auto& [t, ap] : result.ap) result.ap_mean += ap;
    result.ap_mean = iou_thresholds.empty() ? 0.0 : result.ap_mean / nt;
    for (std::size_t k = 0; k < max_detections.size(); ++k) {
        result.ar.emplace_back(max_detections[k],
                               iou_thresholds.empty() ? 0.0 : recall_by_cap[k] / nt);
    }
    return result;
}

EvalResult evaluate(std::span<const PredictionMask> predictions, const Scene& ground_truth) {
    const auto thresholds = coco_iou_thresholds();
    const auto caps = coco_detection_caps();
    return evaluate(predictions, ground_truth, thresholds, caps);
}

}  // namespace bbe
