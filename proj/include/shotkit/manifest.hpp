#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shotkit/moments.hpp"

namespace shotkit {

// One retrieval query: which video, the language query, the ground-truth
// moments, and where the feature tensors live.  Paths are stored as written
// (usually relative to the manifest file; resolve_path handles that).
struct ManifestRecord {
    std::string qid;
    std::string video_id;
    std::string query;
    double duration_s = 0.0;
    std::vector<Moment> moments;
    std::string visual_path;
    std::optional<std::string> audio_path;
    std::optional<std::string> voice_path;
    std::optional<std::string> ambient_path;
    // Shot boundaries, either inline or as a path to a one-index-per-line file.
    std::optional<std::vector<int>> shots_inline;
    std::optional<std::string> shots_path;
};

// Reads a JSONL manifest (one record per line, blank lines ignored).
// Validates: unique qids, positive duration, every moment inside
// [0, duration] with start <= end, non-empty visual_path.  Errors carry the
// line number and qid.
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

void write_manifest(std::span<const ManifestRecord> records, const std::filesystem::path& path);

// Resolves a manifest-relative path against the manifest's directory;
// absolute paths pass through.
std::filesystem::path resolve_path(const std::filesystem::path& manifest_path,
                                   const std::string& stored);

// --- prediction files ---------------------------------------------------------

// One parsed model output per query.
struct PredictionRecord {
    std::string qid;
    std::vector<Moment> moments;
    std::vector<std::string> repairs_applied;
};

// Raw model output per query, before parsing.
struct RawPrediction {
    std::string qid;
    std::string raw;
};

// JSONL with {"qid": ..., "raw": ...} per line.
std::vector<RawPrediction> read_raw_predictions(const std::filesystem::path& path);

// JSONL with {"qid": ..., "moments": [[s, e], ...], "repairs": [...]}.
// Reading also accepts records carrying a "raw" field instead of "moments";
// those are parsed in repair mode without an upper clamp, so evaluation can
// consume either stage of the pipeline.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
void write_predictions(std::span<const PredictionRecord> records,
                       const std::filesystem::path& path);

}  // namespace shotkit
