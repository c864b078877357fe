#include "bbe/grouping.hpp"

#include <algorithm>
#include <numeric>

namespace bbe {

void GroupingConfig::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(t_c) || !in_unit(nms_iou) || !in_unit(t_iou) || !in_unit(seg_threshold)) {
        throw ValidationError("grouping config: thresholds must lie in [0, 1]");
    }
    if (max_detections < 1) {
        throw ValidationError("grouping config: max_detections must be >= 1");
    }
    if (!anchor.valid()) {
        throw ValidationError("grouping config: invalid anchor");
    }
}

std::vector<Peak> find_peaks(const ProbMap& prob, double t_c) {
    const Eigen::Index h = prob.rows(), w = prob.cols();
    std::vector<Peak> peaks;
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < w; ++c) {
            const float v = prob(r, c);
            if (static_cast<double>(v) < t_c) continue;
            bool is_peak = true;
            for (Eigen::Index dr = -1; dr <= 1 && is_peak; ++dr) {
                for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const Eigen::Index nr = r + dr, nc = c + dc;
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    const float nv = prob(nr, nc);
                    // An equal neighbor earlier in row-major order owns the plateau.
                    const bool precedes = dr < 0 || (dr == 0 && dc < 0);
                    if (nv > v || (nv == v && precedes)) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak) peaks.push_back(Peak{r, c, v});
        }
    }
    // Generated in row-major order, so a stable sort breaks ties by index.
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.value > b.value; });
    return peaks;
}

std::vector<ScoredBox> nms(std::vector<ScoredBox> candidates, double iou_threshold,
                           int max_detections) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const ScoredBox& a, const ScoredBox& b) { return a.score > b.score; });
    std::vector<ScoredBox> kept;
    std::vector<char> suppressed(candidates.size(), 0);
    for (std::size_t i = 0;
         i < candidates.size() && kept.size() < static_cast<std::size_t>(max_detections); ++i) {
        if (suppressed[i]) continue;
        kept.push_back(candidates[i]);
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            if (!suppressed[j] && iou(candidates[i].box, candidates[j].box) > iou_threshold) {
                suppressed[j] = 1;
            }
        }
    }
    return kept;
}

std::vector<ScoredBox> select_global_boxes(const ProbMap& prob, const OffsetMap& offsets,
                                           const GroupingConfig& cfg) {
    const auto peaks = find_peaks(prob, cfg.t_c);
    std::vector<ScoredBox> candidates;
    candidates.reserve(peaks.size());
    for (const Peak& p : peaks) {
        const Box anchor = anchor_at(static_cast<double>(p.col), static_cast<double>(p.row),
                                     cfg.anchor);
        candidates.push_back(
            ScoredBox{decode(offsets.at(p.row, p.col), anchor), static_cast<double>(p.value)});
    }
    return nms(std::move(candidates), cfg.nms_iou, cfg.max_detections);
}

GroupingResult assign_pixels(const ProbMap& prob, const OffsetMap& offsets,
                             std::span<const Box> global_boxes, const GroupingConfig& cfg) {
    const Eigen::Index h = prob.rows(), w = prob.cols();
    GroupingResult result;
    result.labels = LabelMap::Zero(h, w);

    const std::size_t m = global_boxes.size();
    std::vector<std::int64_t> pixel_count(m, 0);
    std::vector<double> prob_sum(m, 0.0);
    const double aw = cfg.anchor.width();
    const double ah = cfg.anchor.height();

    if (m > 0) {
        for (Eigen::Index r = 0; r < h; ++r) {
            for (Eigen::Index c = 0; c < w; ++c) {
                const float p = prob(r, c);
                if (static_cast<double>(p) < cfg.seg_threshold) continue;

                const Eigen::Index i = r * w + c;
                const Box pixel_box{static_cast<double>(c) + offsets.data(i, 0) * aw,
                                    static_cast<double>(r) + offsets.data(i, 1) * ah,
                                    aw * std::exp(static_cast<double>(offsets.data(i, 2))),
                                    ah * std::exp(static_cast<double>(offsets.data(i, 3)))};

                double best_iou = 0.0;
                std::size_t best = m;
                for (std::size_t g = 0; g < m; ++g) {
                    const double v = iou(pixel_box, global_boxes[g]);
                    if (v > best_iou) {  // strict: ties keep the lowest index
                        best_iou = v;
                        best = g;
                    }
                }
                if (best < m && best_iou >= cfg.t_iou) {
                    result.labels(r, c) = static_cast<std::uint32_t>(best) + 1;
                    ++pixel_count[best];
                    prob_sum[best] += static_cast<double>(p);
                }
            }
        }
    }

    // Rank surviving boxes by mean probability (stable on ties) and relabel
    // to contiguous ids 1..M in that order.
    std::vector<std::size_t> order;
    for (std::size_t g = 0; g < m; ++g) {
        if (pixel_count[g] > 0) order.push_back(g);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return prob_sum[a] / static_cast<double>(pixel_count[a]) >
               prob_sum[b] / static_cast<double>(pixel_count[b]);
    });

    std::vector<std::uint32_t> relabel(m + 1, 0);
    bool identity = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t g = order[k];
        const auto id = static_cast<std::uint32_t>(k + 1);
        relabel[g + 1] = id;
        identity = identity && g == k;
        result.detections.push_back(Detection{global_boxes[g],
                                              prob_sum[g] / static_cast<double>(pixel_count[g]),
                                              pixel_count[g], id});
    }
    identity = identity && order.size() == m;
    if (!identity) {
        for (Eigen::Index i = 0; i < result.labels.size(); ++i) {
            result.labels.data()[i] = relabel[result.labels.data()[i]];
        }
    }
    return result;
}

GroupingResult group(const ProbMap& prob, const OffsetMap& offsets,
                     const GroupingConfig& cfg) {
    cfg.validate();
    if (prob.rows() != offsets.height || prob.cols() != offsets.width) {
        throw ValidationError("group: probability and offset map shapes differ");
    }
    const auto global = select_global_boxes(prob, offsets, cfg);
    std::vector<Box> boxes;
    boxes.reserve(global.size());
    for (const ScoredBox& sb : global) boxes.push_back(sb.box);
    return assign_pixels(prob, offsets, boxes, cfg);
}

}  // namespace bbe
