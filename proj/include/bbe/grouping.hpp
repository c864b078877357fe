#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bbe/box.hpp"
#include "bbe/maps.hpp"

namespace bbe {

/// Thresholds for the two-stage grouping. Defaults follow the method's
/// stated operating point; t_iou has no published value and defaults to 0.5.
struct GroupingConfig {
    double t_c = 0.6;            // min peak probability for box candidacy
    double nms_iou = 0.4;        // NMS suppression threshold
    double t_iou = 0.5;          // min pixel-box/global-box IoU for assignment
    double seg_threshold = 0.5;  // person-pixel probability cutoff
    int max_detections = 20;
    AnchorConfig anchor;

    void validate() const;
};

struct Peak {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    float value = 0.0f;
};

/// 8-neighborhood local maxima with value >= t_c.
///
/// A pixel qualifies when no in-bounds neighbor exceeds it and no
/// equal-valued neighbor precedes it in row-major order, so each small
/// plateau yields one representative (its row-major-first pixel). Output is
/// sorted by value descending, ties by row-major index.
std::vector<Peak> find_peaks(const ProbMap& prob, double t_c);

struct ScoredBox {
    Box box;
    double score = 0.0;
};

/// Greedy non-maximum suppression. Candidates are sorted by score
/// (descending, stable on ties); each kept box suppresses every remaining
/// candidate with IoU strictly above `iou_threshold`. Stops after
/// `max_detections` keeps.
std::vector<ScoredBox> nms(std::vector<ScoredBox> candidates, double iou_threshold,
                           int max_detections);

/// Stage one: decode the predicted box at every qualifying peak, score it
/// with the peak's probability, and apply NMS.
std::vector<ScoredBox> select_global_boxes(const ProbMap& prob, const OffsetMap& offsets,
                                           const GroupingConfig& cfg);

struct Detection {
    Box box;
    double score = 0.0;            // mean probability over assigned pixels
    std::int64_t pixel_count = 0;
    std::uint32_t instance_id = 0;
};

struct GroupingResult {
    std::vector<Detection> detections;  // score-descending, ids 1..M
    LabelMap labels;                    // 0 = background / discarded
};

/// Stage two: every pixel with probability >= seg_threshold decodes its box
/// and joins the global box of maximum IoU, provided that IoU >= t_iou
/// (ties go to the lowest-index, i.e. highest-confidence, global box);
/// otherwise the pixel is discarded as a false positive. Work is
/// proportional to |person pixels| * |global boxes|.
///
/// Detections are scored by the mean probability of their pixels; boxes that
/// end up with no pixels are dropped. Ids are 1..M in score-descending order.
GroupingResult assign_pixels(const ProbMap& prob, const OffsetMap& offsets,
                             std::span<const Box> global_boxes, const GroupingConfig& cfg);

/// Both stages. Throws ValidationError on shape mismatch or a bad config.
GroupingResult group(const ProbMap& prob, const OffsetMap& offsets,
                     const GroupingConfig& cfg);

}  // namespace bbe
