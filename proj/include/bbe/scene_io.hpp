#pragma once

#include <iosfwd>
#include <string>

#include "bbe/eval.hpp"
#include "bbe/synth.hpp"

namespace bbe {

/// Scene JSON:
///   {"height": H, "width": W, "seed": S,
///    "instances": [{"id": n, "is_crowd": b, "rle": [counts...]}, ...]}
/// RLE counts are the column-major convention of RleMask. `seed` is
/// optional on input. Instance boxes are recomputed from the masks.
Scene read_scene_json(std::istream& in);
void write_scene_json(std::ostream& out, const Scene& scene);

/// Prediction JSON: [{"score": s, "box": [cx, cy, w, h], "rle": [counts...]}].
/// Mask dimensions come from the caller (the companion scene or label map).
std::vector<PredictionMask> read_predictions_json(std::istream& in, Eigen::Index height,
                                                  Eigen::Index width);
void write_predictions_json(std::ostream& out, std::span<const PredictionMask> predictions);

/// Metrics JSON: {"ap": {"0.50": v, ...}, "ap_mean": v, "ar": {"1": v, ...}}.
void write_metrics_json(std::ostream& out, const EvalResult& result);

// File-path wrappers; IoError on open/write failure.
Scene load_scene_json(const std::string& path);
void save_scene_json(const std::string& path, const Scene& scene);
std::vector<PredictionMask> load_predictions_json(const std::string& path, Eigen::Index height,
                                                  Eigen::Index width);
void save_predictions_json(const std::string& path, std::span<const PredictionMask> predictions);
void save_metrics_json(const std::string& path, const EvalResult& result);

}  // namespace bbe
