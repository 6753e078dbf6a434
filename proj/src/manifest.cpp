#include "shotkit/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace shotkit {

using nlohmann::json;

namespace {

[[noreturn]] void bad_record(const std::filesystem::path& path, std::int64_t line_no,
                             const std::string& why) {
    throw Error(ErrorCode::BadManifest,
                path.string() + ":" + std::to_string(line_no) + ": " + why);
}

std::vector<Moment> moments_from_json(const json& arr) {
    std::vector<Moment> moments;
    for (const json& pair : arr) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            throw Error(ErrorCode::BadManifest, "each moment must be a [start, end] pair");
        }
        moments.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return moments;
}

json moments_to_json(const std::vector<Moment>& moments) {
    json arr = json::array();
    for (const Moment& m : moments) arr.push_back(json::array({m.start_s, m.end_s}));
    return arr;
}

// Streams a JSONL file line by line through `consume(line_no, parsed)`.
template <class Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& consume) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json parsed = json::parse(line, nullptr, false);
        if (parsed.is_discarded()) {
            throw Error(ErrorCode::BadManifest,
                        path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
        }
        consume(line_no, parsed);
    }
}

}  // namespace

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
    std::vector<ManifestRecord> records;
    std::unordered_set<std::string> seen_qids;
    for_each_jsonl(path, [&](std::int64_t line_no, const json& j) {
        ManifestRecord rec;
        try {
            rec.qid = j.at("qid").get<std::string>();
            rec.video_id = j.at("video_id").get<std::string>();
            rec.query = j.at("query").get<std::string>();
            rec.duration_s = j.at("duration_s").get<double>();
            rec.moments = moments_from_json(j.at("moments"));
            rec.visual_path = j.at("visual_path").get<std::string>();
            if (j.contains("audio_path")) rec.audio_path = j["audio_path"].get<std::string>();
            if (j.contains("voice_path")) rec.voice_path = j["voice_path"].get<std::string>();
            if (j.contains("ambient_path")) {
                rec.ambient_path = j["ambient_path"].get<std::string>();
            }
            if (j.contains("shots_path")) rec.shots_path = j["shots_path"].get<std::string>();
            if (j.contains("shots_inline")) {
                rec.shots_inline = j["shots_inline"].get<std::vector<int>>();
            }
        } catch (const json::exception& e) {
            bad_record(path, line_no, e.what());
        } catch (const Error& e) {
            bad_record(path, line_no, e.what());
        }
        if (rec.qid.empty()) bad_record(path, line_no, "empty qid");
        if (!seen_qids.insert(rec.qid).second) {
            bad_record(path, line_no, "duplicate qid '" + rec.qid + "'");
        }
        if (!(rec.duration_s > 0.0)) {
            bad_record(path, line_no, "duration must be positive (qid '" + rec.qid + "')");
        }
        if (rec.visual_path.empty()) {
            bad_record(path, line_no, "empty visual_path (qid '" + rec.qid + "')");
        }
        for (const Moment& m : rec.moments) {
            if (!(m.start_s >= 0.0) || !(m.start_s <= m.end_s) ||
                !(m.end_s <= rec.duration_s)) {
                bad_record(path, line_no,
                           "moment outside [0, duration] or start > end (qid '" + rec.qid + "')");
            }
        }
        records.push_back(std::move(rec));
    });
    return records;
}

void write_manifest(std::span<const ManifestRecord> records,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    for (const ManifestRecord& rec : records) {
        json j{{"qid", rec.qid},
               {"video_id", rec.video_id},
               {"query", rec.query},
               {"duration_s", rec.duration_s},
               {"moments", moments_to_json(rec.moments)},
               {"visual_path", rec.visual_path}};
        if (rec.audio_path) j["audio_path"] = *rec.audio_path;
        if (rec.voice_path) j["voice_path"] = *rec.voice_path;
        if (rec.ambient_path) j["ambient_path"] = *rec.ambient_path;
        if (rec.shots_path) j["shots_path"] = *rec.shots_path;
        if (rec.shots_inline) j["shots_inline"] = *rec.shots_inline;
        out << j.dump() << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "manifest write failed");
}

std::filesystem::path resolve_path(const std::filesystem::path& manifest_path,
                                   const std::string& stored) {
    const std::filesystem::path p(stored);
    if (p.is_absolute()) return p;
    return manifest_path.parent_path() / p;
}

std::vector<RawPrediction> read_raw_predictions(const std::filesystem::path& path) {
    std::vector<RawPrediction> out;
    for_each_jsonl(path, [&](std::int64_t line_no, const json& j) {
        try {
            out.push_back({j.at("qid").get<std::string>(), j.at("raw").get<std::string>()});
        } catch (const json::exception& e) {
            bad_record(path, line_no, e.what());
        }
    });
    return out;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    std::vector<PredictionRecord> out;
    for_each_jsonl(path, [&](std::int64_t line_no, const json& j) {
        PredictionRecord rec;
        try {
            rec.qid = j.at("qid").get<std::string>();
            if (j.contains("moments")) {
                rec.moments = moments_from_json(j["moments"]);
                if (j.contains("repairs")) {
                    rec.repairs_applied = j["repairs"].get<std::vector<std::string>>();
                }
            } else if (j.contains("raw")) {
                try {
                    MomentList parsed = parse_moments(j["raw"].get<std::string>(), 0.0, false);
                    rec.moments = std::move(parsed.moments);
                    rec.repairs_applied = std::move(parsed.repairs_applied);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::Unrecoverable) throw;
                    // An output no repair can rescue scores as zero
                    // predictions rather than poisoning the whole batch.
                    rec.moments.clear();
                }
            } else {
                bad_record(path, line_no, "prediction needs a 'moments' or 'raw' field");
            }
        } catch (const json::exception& e) {
            bad_record(path, line_no, e.what());
        }
        out.push_back(std::move(rec));
    });
    return out;
}

void write_predictions(std::span<const PredictionRecord> records,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    for (const PredictionRecord& rec : records) {
        json j{{"qid", rec.qid},
               {"moments", moments_to_json(rec.moments)},
               {"repairs", rec.repairs_applied}};
        out << j.dump() << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "prediction write failed");
}

}  // namespace shotkit
