#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shotkit/compress.hpp"
#include "shotkit/keyframes.hpp"
#include "shotkit/manifest.hpp"
#include "shotkit/sequence.hpp"
#include "shotkit/shots.hpp"

namespace shotkit {

// Frame subsampling: which of n_available frames to keep when the stream is
// longer than the frame budget.
enum class SampleMode { uniform, seeded_random };

// n <= n_available sorted distinct indices.  uniform picks
// floor(i * n_available / n); seeded_random draws without replacement from a
// deterministic generator.
std::vector<std::int64_t> sample_frames(std::int64_t n_available, std::int64_t n,
                                        SampleMode mode, std::uint64_t seed);

struct PipelineConfig {
    // Frame budget (streams longer than this are subsampled).
    int n_frames = 80;
    SampleMode sample_mode = SampleMode::uniform;
    std::uint64_t seed = 0;
    // Keyframe budget; clamped to the sampled frame count per video.
    int k = 32;
    KeyframeScope keyframe_scope = KeyframeScope::global_topk;
    // Motion smoothing for keyframe scoring.
    double smooth_sigma = 1.0;
    ShotDetectConfig shot_detect;
    // Prefer manifest-provided shot boundaries over detection when present.
    bool use_imported_shots = true;
    double rho = 0.25;
    // Audio token budget.
    std::int64_t audio_budget = 150;
    Strategy strategy = Strategy::overall;
    TimeStyle time_style = TimeStyle::int_seconds;
    // Instruction text appended as the final element; empty selects the
    // built-in default.
    std::string prompt_text;
    // Worker threads; 0 = hardware concurrency.
    int threads = 0;
};

// The built-in instruction template (used when PipelineConfig::prompt_text
// is empty).
std::string default_prompt_text();

// Per-record outcome; failures are recorded, not fatal to the batch.
struct RecordOutcome {
    std::string qid;
    std::string video_id;
    bool ok = false;
    std::string error;  // empty when ok
    CompressionReport report;
    SequenceStats stats;
};

struct PipelineResult {
    std::vector<RecordOutcome> outcomes;  // manifest order
    int n_failed = 0;
};

// Loaded inputs for one record (tensors already in memory).
struct LoadedRecord {
    ManifestRecord record;
    VideoFeatures video;
    std::optional<AudioFeatures> audio;    // mixed stream
    std::optional<AudioFeatures> voice;
    std::optional<AudioFeatures> ambient;
};

// Reads the tensors a record references (paths resolved against
// manifest_path) and assigns frame-center timestamps over the duration.
LoadedRecord load_record(const ManifestRecord& record,
                         const std::filesystem::path& manifest_path);

// Core of the pipeline for one already-loaded record: sample, segment,
// select, compress, pool, assemble.  record_index salts the sampling seed so
// seeded_random draws differ across records but reruns are identical.
PromptSequence run_record(const LoadedRecord& input, const PipelineConfig& config,
                          std::int64_t record_index, CompressionReport* report_out = nullptr);

// Just the visual stages (sample, segment, select, compress) — what the
// sweep's ratio column needs; audio and assembly settings are ignored.
CompressionReport compress_record(const LoadedRecord& input, const PipelineConfig& config,
                                  std::int64_t record_index);

// Batch run: one <qid>.seq file per record plus reports.csv (manifest order)
// in out_dir.  Individual record failures are recorded in the outcome list
// and reports.csv gets no row for them.
PipelineResult run_pipeline(std::span<const ManifestRecord> records,
                            const std::filesystem::path& manifest_path,
                            const PipelineConfig& config,
                            const std::filesystem::path& out_dir);

}  // namespace shotkit
