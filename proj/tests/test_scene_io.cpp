#include <doctest.h>

#include <sstream>

#include "bbe/scene_io.hpp"
#include "bbe/synth.hpp"

using namespace bbe;

TEST_CASE("scene JSON round-trips masks, flags and the seed") {
    const Scene scene = generate_scene(48, 40, 3, ShapeKind::Ellipse, 17);
    std::ostringstream out;
    write_scene_json(out, scene);

    std::istringstream in(out.str());
    const Scene back = read_scene_json(in);
    CHECK(back.height == scene.height);
    CHECK(back.width == scene.width);
    CHECK(back.seed == scene.seed);
    REQUIRE(back.instances.size() == scene.instances.size());
    for (std::size_t i = 0; i < back.instances.size(); ++i) {
        CHECK(back.instances[i].id == scene.instances[i].id);
        CHECK(back.instances[i].is_crowd == scene.instances[i].is_crowd);
        CHECK((back.instances[i].mask == scene.instances[i].mask).all());
        CHECK(back.instances[i].box.cx == scene.instances[i].box.cx);
    }

    // writing twice produces identical bytes
    std::ostringstream out2;
    write_scene_json(out2, scene);
    CHECK(out.str() == out2.str());
}

TEST_CASE("scene JSON rejects malformed documents") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_scene_json(in);
    };
    CHECK_THROWS_AS(parse("not json"), FormatError);
    CHECK_THROWS_AS(parse("{}"), FormatError);
    CHECK_THROWS_AS(parse(R"({"height": 2, "width": 2, "instances": [{"id": 0, "rle": [4]}]})"),
                    FormatError);
    // counts do not cover the canvas
    CHECK_THROWS_AS(parse(R"({"height": 2, "width": 2, "instances": [{"id": 1, "rle": [3]}]})"),
                    FormatError);
    // an all-background mask is an empty instance
    CHECK_THROWS_AS(parse(R"({"height": 2, "width": 2, "instances": [{"id": 1, "rle": [4]}]})"),
                    ValidationError);
}

TEST_CASE("predictions JSON round-trips") {
    BinaryMask m = BinaryMask::Zero(6, 6);
    m.block(1, 1, 3, 2).setConstant(1);
    std::vector<PredictionMask> preds = {PredictionMask{0.75, tight_box(m), rle_encode(m)}};

    std::ostringstream out;
    write_predictions_json(out, preds);
    std::istringstream in(out.str());
    const auto back = read_predictions_json(in, 6, 6);
    REQUIRE(back.size() == 1);
    CHECK(back[0].score == 0.75);
    CHECK(back[0].box.cx == preds[0].box.cx);
    CHECK(back[0].mask == preds[0].mask);
}

TEST_CASE("metrics JSON lists thresholds with fixed keys") {
    EvalResult res;
    res.ap = {{0.5, 1.0}, {0.55, 0.75}};
    res.ap_mean = 0.875;
    res.ar = {{1, 0.5}, {10, 1.0}};
    std::ostringstream out;
    write_metrics_json(out, res);
    const std::string text = out.str();
    CHECK(text.find("\"0.50\": 1.0") != std::string::npos);
    CHECK(text.find("\"0.55\": 0.75") != std::string::npos);
    CHECK(text.find("\"ap_mean\": 0.875") != std::string::npos);
    CHECK(text.find("\"10\": 1.0") != std::string::npos);
}
