#include "bbe/scene_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace bbe {

namespace {

using json = nlohmann::ordered_json;

json parse_stream(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("JSON parse error: ") + e.what());
    }
}

std::vector<std::uint32_t> counts_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("rle counts must be an array");
    std::vector<std::uint32_t> counts;
    counts.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_unsigned()) {
            throw FormatError("rle counts must be non-negative integers");
        }
        counts.push_back(v.get<std::uint32_t>());
    }
    return counts;
}

}  // namespace

Scene read_scene_json(std::istream& in) {
    const json doc = parse_stream(in);
    if (!doc.is_object() || !doc.contains("height") || !doc.contains("width") ||
        !doc.contains("instances")) {
        throw FormatError("scene JSON must contain height, width and instances");
    }
    if (!doc["height"].is_number_unsigned() || !doc["width"].is_number_unsigned()) {
        throw FormatError("scene dimensions must be non-negative integers");
    }
    Scene scene;
    scene.height = doc["height"].get<Eigen::Index>();
    scene.width = doc["width"].get<Eigen::Index>();
    if (scene.height <= 0 || scene.width <= 0) {
        throw FormatError("scene dimensions must be positive");
    }
    scene.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& inst : doc["instances"]) {
        if (!inst.is_object() || !inst.contains("id") || !inst.contains("rle")) {
            throw FormatError("instance entries need id and rle");
        }
        if (!inst["id"].is_number_unsigned() || inst["id"].get<std::uint64_t>() == 0) {
            throw FormatError("instance id must be a positive integer");
        }
        RleMask rle;
        rle.height = scene.height;
        rle.width = scene.width;
        rle.counts = counts_from_json(inst["rle"]);
        scene.instances.push_back(make_annotation(inst["id"].get<std::uint32_t>(),
                                                  inst.value("is_crowd", false),
                                                  rle_decode(rle)));
    }
    return scene;
}

void write_scene_json(std::ostream& out, const Scene& scene) {
    json doc;
    doc["height"] = scene.height;
    doc["width"] = scene.width;
    doc["seed"] = scene.seed;
    doc["instances"] = json::array();
    for (const InstanceAnnotation& ann : scene.instances) {
        json inst;
        inst["id"] = ann.id;
        inst["is_crowd"] = ann.is_crowd;
        inst["rle"] = rle_encode(ann.mask).counts;
        doc["instances"].push_back(std::move(inst));
    }
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("scene JSON write failed");
}

std::vector<PredictionMask> read_predictions_json(std::istream& in, Eigen::Index height,
                                                  Eigen::Index width) {
    const json doc = parse_stream(in);
    if (!doc.is_array()) throw FormatError("predictions JSON must be an array");
    std::vector<PredictionMask> predictions;
    predictions.reserve(doc.size());
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("score") || !entry.contains("box") ||
            !entry.contains("rle")) {
            throw FormatError("prediction entries need score, box and rle");
        }
        PredictionMask p;
        if (!entry["score"].is_number()) throw FormatError("prediction score must be a number");
        p.score = entry["score"].get<double>();
        const auto& box = entry["box"];
        if (!box.is_array() || box.size() != 4) {
            throw FormatError("prediction box must be [cx, cy, w, h]");
        }
        p.box = Box{box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                    box[3].get<double>()};
        p.mask.height = height;
        p.mask.width = width;
        p.mask.counts = counts_from_json(entry["rle"]);
        predictions.push_back(std::move(p));
    }
    return predictions;
}

void write_predictions_json(std::ostream& out, std::span<const PredictionMask> predictions) {
    json doc = json::array();
    for (const PredictionMask& p : predictions) {
        json entry;
        entry["score"] = p.score;
        entry["box"] = {p.box.cx, p.box.cy, p.box.w, p.box.h};
        entry["rle"] = p.mask.counts;
        doc.push_back(std::move(entry));
    }
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("predictions JSON write failed");
}

void write_metrics_json(std::ostream& out, const EvalResult& result) {
    json doc;
    json ap;
    for (const auto& [threshold, value] : result.ap) {
        std::ostringstream key;
        key << std::fixed << std::setprecision(2) << threshold;
        ap[key.str()] = value;
    }
    doc["ap"] = std::move(ap);
    doc["ap_mean"] = result.ap_mean;
    json ar;
    for (const auto& [cap, value] : result.ar) {
        ar[std::to_string(cap)] = value;
    }
    doc["ar"] = std::move(ar);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("metrics JSON write failed");
}

namespace {

std::ifstream open_text_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

std::ofstream open_text_out(const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

}  // namespace

Scene load_scene_json(const std::string& path) {
    auto f = open_text_in(path);
    return read_scene_json(f);
}

void save_scene_json(const std::string& path, const Scene& scene) {
    auto f = open_text_out(path);
    write_scene_json(f, scene);
}

std::vector<PredictionMask> load_predictions_json(const std::string& path, Eigen::Index height,
                                                  Eigen::Index width) {
    auto f = open_text_in(path);
    return read_predictions_json(f, height, width);
}

void save_predictions_json(const std::string& path, std::span<const PredictionMask> predictions) {
    auto f = open_text_out(path);
    write_predictions_json(f, predictions);
}

void save_metrics_json(const std::string& path, const EvalResult& result) {
    auto f = open_text_out(path);
    write_metrics_json(f, result);
}

}  // namespace bbe
