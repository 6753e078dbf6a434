#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "shotkit/manifest.hpp"

using namespace shotkit;

namespace {

ManifestRecord full_record() {
    ManifestRecord r;
    r.qid = "q0001";
    r.video_id = "vid0001";
    r.query = "person opens the door";
    r.duration_s = 60.0;
    r.moments = {Moment{5.0, 10.0}, Moment{20.0, 30.0}};
    r.visual_path = "vid0001.stcf";
    r.audio_path = "vid0001.audio.stcf";
    r.shots_inline = std::vector<int>{10, 20};
    return r;
}

}  // namespace

TEST_CASE("manifest records round-trip through JSON lines") {
    test::TempDir dir("manifest");
    const auto path = dir.path() / "manifest.jsonl";

    ManifestRecord full = full_record();
    ManifestRecord minimal;
    minimal.qid = "q0002";
    minimal.video_id = "vid0002";
    minimal.query = "a dog barks";
    minimal.duration_s = 12.5;
    minimal.moments = {Moment{1.0, 2.0}};
    minimal.visual_path = "vid0002.stcf";
    ManifestRecord dual;
    dual.qid = "q0003";
    dual.video_id = "vid0003";
    dual.query = "narrator speaks";
    dual.duration_s = 30.0;
    dual.moments = {Moment{0.0, 30.0}};
    dual.visual_path = "vid0003.stcf";
    dual.voice_path = "vid0003.voice.stcf";
    dual.ambient_path = "vid0003.ambient.stcf";
    dual.shots_path = "vid0003.shots.txt";

    const std::vector<ManifestRecord> records = {full, minimal, dual};
    write_manifest(records, path);
    const std::vector<ManifestRecord> back = read_manifest(path);

    REQUIRE(back.size() == 3);
    CHECK(back[0].qid == "q0001");
    CHECK(back[0].video_id == "vid0001");
    CHECK(back[0].query == "person opens the door");
    CHECK(back[0].duration_s == 60.0);
    CHECK(back[0].moments == full.moments);
    CHECK(back[0].visual_path == "vid0001.stcf");
    REQUIRE(back[0].audio_path.has_value());
    CHECK(*back[0].audio_path == "vid0001.audio.stcf");
    REQUIRE(back[0].shots_inline.has_value());
    CHECK(*back[0].shots_inline == std::vector<int>{10, 20});
    CHECK_FALSE(back[0].voice_path.has_value());

    CHECK_FALSE(back[1].audio_path.has_value());
    CHECK_FALSE(back[1].shots_inline.has_value());
    CHECK_FALSE(back[1].shots_path.has_value());

    REQUIRE(back[2].voice_path.has_value());
    REQUIRE(back[2].ambient_path.has_value());
    REQUIRE(back[2].shots_path.has_value());
    CHECK(*back[2].shots_path == "vid0003.shots.txt");
}

TEST_CASE("manifest JSON uses the documented field names") {
    test::TempDir dir("fields");
    const auto path = dir.path() / "manifest.jsonl";
    const std::vector<ManifestRecord> records = {full_record()};
    write_manifest(records, path);

    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    const nlohmann::json parsed = nlohmann::json::parse(line);
    CHECK(parsed.contains("qid"));
    CHECK(parsed.contains("video_id"));
    CHECK(parsed.contains("duration_s"));
    CHECK(parsed.contains("query"));
    CHECK(parsed.contains("moments"));
    CHECK(parsed.contains("visual_path"));
    CHECK(parsed.contains("audio_path"));
    CHECK(parsed.contains("shots_inline"));
    CHECK(parsed["moments"][0][0].get<double>() == 5.0);
    CHECK(parsed["moments"][0][1].get<double>() == 10.0);
}

TEST_CASE("manifest reader rejects malformed records") {
    test::TempDir dir("badmanifest");
    const auto path = dir.path() / "manifest.jsonl";
    {
        std::ofstream out(path);
        out << "{\"qid\": \"q1\"}\n";  // missing the required fields
    }
    CHECK_THROWS_AS(read_manifest(path), Error);

    const auto junk = dir.path() / "junk.jsonl";
    {
        std::ofstream out(junk);
        out << "not json at all\n";
    }
    CHECK_THROWS_AS(read_manifest(junk), Error);

    CHECK_THROWS_AS(read_manifest(dir.path() / "missing.jsonl"), Error);
}

TEST_CASE("stored paths resolve relative to the manifest") {
    const auto manifest = std::filesystem::path("/data/run1/manifest.jsonl");
    CHECK(resolve_path(manifest, "vid.stcf") == std::filesystem::path("/data/run1/vid.stcf"));
    CHECK(resolve_path(manifest, "sub/vid.stcf") ==
          std::filesystem::path("/data/run1/sub/vid.stcf"));
    CHECK(resolve_path(manifest, "/abs/vid.stcf") == std::filesystem::path("/abs/vid.stcf"));
}

TEST_CASE("prediction records round-trip with repairs") {
    test::TempDir dir("preds");
    const auto path = dir.path() / "predictions.jsonl";
    PredictionRecord a;
    a.qid = "q1";
    a.moments = {Moment{1.0, 2.0}};
    a.repairs_applied = {"append-brackets"};
    PredictionRecord b;
    b.qid = "q2";  // parse failure: empty moments, no repairs
    const std::vector<PredictionRecord> records = {a, b};
    write_predictions(records, path);

    const std::vector<PredictionRecord> back = read_predictions(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].qid == "q1");
    CHECK(back[0].moments == a.moments);
    CHECK(back[0].repairs_applied == a.repairs_applied);
    CHECK(back[1].moments.empty());
}

TEST_CASE("raw prediction files carry qid and raw text") {
    test::TempDir dir("raw");
    const auto path = dir.path() / "raw.jsonl";
    {
        std::ofstream out(path);
        out << R"({"qid": "q1", "raw": "[[5, 10]]"})" << "\n";
        out << R"({"qid": "q2", "raw": "no answer"})" << "\n";
    }
    const std::vector<RawPrediction> raw = read_raw_predictions(path);
    REQUIRE(raw.size() == 2);
    CHECK(raw[0].qid == "q1");
    CHECK(raw[0].raw == "[[5, 10]]");
    CHECK(raw[1].raw == "no answer");
}
