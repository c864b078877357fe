#pragma once

#include <span>
#include <vector>

#include "bbe/grouping.hpp"
#include "bbe/rle.hpp"
#include "bbe/synth.hpp"

namespace bbe {

/// One prediction in the interchange format: confidence, box, RLE mask.
struct PredictionMask {
    double score = 0.0;
    Box box;
    RleMask mask;
};

/// Grouping output converted to scored mask predictions (one per detection,
/// masks cut from the label map).
std::vector<PredictionMask> predictions_from_grouping(const GroupingResult& result);

struct EvalResult {
    std::vector<std::pair<double, double>> ap;  // (iou threshold, average precision)
    double ap_mean = 0.0;                       // mean over the thresholds above
    std::vector<std::pair<int, double>> ar;     // (detection cap, average recall)
};

/// The ten mask-IoU thresholds 0.50:0.05:0.95.
std::vector<double> coco_iou_thresholds();

/// Default detection caps for average recall.
std::vector<int> coco_detection_caps();

/// Greedy score-ordered matching per IoU threshold with 101-point
/// interpolated average precision.
///
/// Each prediction (score-descending) matches the unmatched non-crowd
/// ground-truth mask of highest IoU among those at or above the threshold.
/// Crowd instances act as ignore regions: an unmatched prediction whose
/// crowd overlap (|p & crowd| / |p|) reaches the threshold is neither a true
/// nor a false positive. AR under cap K is the mean over thresholds of the
/// recall achieved by the top-K predictions. With no non-crowd ground truth
/// every metric is 0.
EvalResult evaluate(std::span<const PredictionMask> predictions, const Scene& ground_truth,
                    std::span<const double> iou_thresholds, std::span<const int> max_detections);

/// Same, with the standard thresholds and caps.
EvalResult evaluate(std::span<const PredictionMask> predictions, const Scene& ground_truth);

}  // namespace bbe
