#include "shotkit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "shotkit/audio.hpp"
#include "shotkit/keyframes.hpp"
#include "shotkit/motion.hpp"
#include "shotkit/rng.hpp"
#include "shotkit/tensor_io.hpp"

namespace shotkit {

std::vector<std::int64_t> sample_frames(std::int64_t n_available, std::int64_t n,
                                        SampleMode mode, std::uint64_t seed) {
    if (n_available < 1) throw Error(ErrorCode::InvalidN, "no frames available");
    if (n < 1 || n > n_available) {
        throw Error(ErrorCode::InvalidN, "sample size must be in [1, " +
                                             std::to_string(n_available) + "], got " +
                                             std::to_string(n));
    }
    std::vector<std::int64_t> indices(static_cast<std::size_t>(n));
    if (mode == SampleMode::uniform) {
        for (std::int64_t i = 0; i < n; ++i) {
            indices[static_cast<std::size_t>(i)] = i * n_available / n;
        }
    } else {
        // Partial Fisher-Yates over the index range, then sort.
        Rng rng(seed);
        std::vector<std::int64_t> pool(static_cast<std::size_t>(n_available));
        std::iota(pool.begin(), pool.end(), 0);
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t j = rng.uniform_int(i, n_available - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        indices.assign(pool.begin(), pool.begin() + n);
        std::sort(indices.begin(), indices.end());
    }
    return indices;
}

std::string default_prompt_text() {
    return "Identify every moment relevant to the query and answer with a list of "
           "[start_seconds, end_seconds] pairs, e.g. [[12, 34], [56, 78]].";
}

namespace {

VideoFeatures gather_frames(const VideoFeatures& video, std::span<const std::int64_t> indices) {
    VideoFeatures out;
    out.video_id = video.video_id;
    out.duration_s = video.duration_s;
    const std::int64_t block = video.n_positions() * video.feat_dim();
    out.frame_features.shape = {static_cast<std::int64_t>(indices.size()), video.n_positions(),
                                video.feat_dim()};
    out.frame_features.data.reserve(indices.size() * static_cast<std::size_t>(block));
    out.frame_timestamps_s.reserve(indices.size());
    for (std::int64_t idx : indices) {
        const std::span<const float> frame = video.frame_view(idx);
        out.frame_features.data.insert(out.frame_features.data.end(), frame.begin(), frame.end());
        out.frame_timestamps_s.push_back(video.frame_timestamps_s[static_cast<std::size_t>(idx)]);
    }
    return out;
}

AudioFeatures load_audio(const std::filesystem::path& path, StreamKind kind,
                         const std::string& video_id) {
    AudioFeatures audio;
    audio.video_id = video_id;
    audio.stream_kind = kind;
    audio.tokens = read_tensor(path);
    if (auto issue = validate_audio_features(audio)) raise(*issue);
    return audio;
}

}  // namespace

LoadedRecord load_record(const ManifestRecord& record,
                         const std::filesystem::path& manifest_path) {
    LoadedRecord loaded;
    loaded.record = record;

    VideoFeatures& video = loaded.video;
    video.video_id = record.video_id;
    video.duration_s = record.duration_s;
    video.frame_features = read_tensor(resolve_path(manifest_path, record.visual_path));
    if (video.frame_features.ndim() != 3) {
        throw Error(ErrorCode::ShapeMismatch,
                    "visual tensor for '" + record.qid + "' must be rank 3, got rank " +
                        std::to_string(video.frame_features.ndim()));
    }
    // The container stores no timeline, so frames take their sampling-grid
    // centers: frame i of N covers [i, i+1) * duration / N.
    const std::int64_t n = video.n_frames();
    video.frame_timestamps_s.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        video.frame_timestamps_s[static_cast<std::size_t>(i)] =
            (static_cast<double>(i) + 0.5) * record.duration_s / static_cast<double>(n);
    }
    require_valid_video(video);

    if (record.audio_path) {
        loaded.audio = load_audio(resolve_path(manifest_path, *record.audio_path),
                                  StreamKind::mixed, record.video_id);
    }
    if (record.voice_path) {
        loaded.voice = load_audio(resolve_path(manifest_path, *record.voice_path),
                                  StreamKind::voice, record.video_id);
    }
    if (record.ambient_path) {
        loaded.ambient = load_audio(resolve_path(manifest_path, *record.ambient_path),
                                    StreamKind::ambient, record.video_id);
    }
    if (record.shots_path) {
        // Resolve now so run_record never needs the manifest directory.
        loaded.record.shots_path = resolve_path(manifest_path, *record.shots_path).string();
    }
    return loaded;
}

namespace {

// Stages 1-4 (sample, segment, select, compress), shared by run_record and
// compress_record.
struct VisualStage {
    VideoFeatures video;  // post-sampling
    CompressedVisual compressed;
};

// Shot boundaries arrive in original-frame indices; after subsampling a
// sampled frame starts a shot iff its original shot differs from the
// previous pick's.  Shots that lost every frame to sampling vanish.
ShotList remap_shots(const ShotList& original, std::span<const std::int64_t> picks) {
    std::vector<int> boundaries;
    for (std::size_t j = 1; j < picks.size(); ++j) {
        if (original.shot_of(static_cast<int>(picks[j])) !=
            original.shot_of(static_cast<int>(picks[j - 1]))) {
            boundaries.push_back(static_cast<int>(j));
        }
    }
    return import_shots(boundaries, static_cast<int>(picks.size()));
}

VisualStage run_visual_stage(const LoadedRecord& input, const PipelineConfig& config,
                             std::int64_t record_index) {
    if (config.n_frames < 1) throw Error(ErrorCode::InvalidN, "frame budget must be >= 1");
    if (!(config.rho > 0.0) || config.rho > 1.0) {
        throw Error(ErrorCode::InvalidRho, "rho must be in (0, 1]");
    }

    // 1. Subsample frames down to the budget.
    const std::int64_t available = input.video.n_frames();
    const std::int64_t target = std::min<std::int64_t>(config.n_frames, available);
    VisualStage stage;
    std::vector<std::int64_t> picks;
    if (target < available) {
        picks = sample_frames(available, target, config.sample_mode,
                              config.seed + static_cast<std::uint64_t>(record_index));
        stage.video = gather_frames(input.video, picks);
    } else {
        stage.video = input.video;
    }
    const int n = static_cast<int>(stage.video.n_frames());

    // 2. Shot structure: imported boundaries when provided, else detection.
    ShotList shots;
    if (config.use_imported_shots && (input.record.shots_inline || input.record.shots_path)) {
        ShotList original =
            input.record.shots_inline
                ? import_shots(*input.record.shots_inline, static_cast<int>(available))
                // load_record resolved this path against the manifest directory.
                : read_shot_boundaries(*input.record.shots_path, static_cast<int>(available));
        shots = picks.empty() ? std::move(original) : remap_shots(original, picks);
    } else {
        shots = detect_shots(stage.video, config.shot_detect);
    }

    // 3. Keyframes over the smoothed motion series.
    const MotionSeries series = motion_series(stage.video, config.smooth_sigma);
    const int k = std::min(config.k, n);
    const KeyframeSet keyframes = select_keyframes(series, shots, k, config.keyframe_scope);

    // 4. Per-shot variance analysis and token compression.
    const VariancePlan plan = plan_variance(stage.video, shots, config.rho);
    stage.compressed = compress(stage.video, keyframes, plan);
    return stage;
}

}  // namespace

CompressionReport compress_record(const LoadedRecord& input, const PipelineConfig& config,
                                  std::int64_t record_index) {
    return compression_report(run_visual_stage(input, config, record_index).compressed.selection);
}

PromptSequence run_record(const LoadedRecord& input, const PipelineConfig& config,
                          std::int64_t record_index, CompressionReport* report_out) {
    VisualStage stage = run_visual_stage(input, config, record_index);
    const VideoFeatures* active = &stage.video;
    const CompressedVisual& compressed = stage.compressed;
    if (report_out) *report_out = compression_report(compressed.selection);

    // 5. Audio pooling and final assembly.
    const std::string prompt =
        config.prompt_text.empty() ? default_prompt_text() : config.prompt_text;
    AssembleConfig assemble_config{config.strategy, config.time_style};

    if (config.strategy == Strategy::dual_stream) {
        if (!input.voice || !input.ambient) {
            throw Error(ErrorCode::InconsistentInputs,
                        "dual_stream needs voice and ambient streams for '" + input.record.qid +
                            "'");
        }
        const auto [voice, ambient] = pool_dual(*input.voice, *input.ambient, config.audio_budget);
        return assemble_dual(compressed, voice, ambient, *active, input.record.query, prompt,
                             assemble_config);
    }

    AudioFeatures silent;
    silent.video_id = input.record.video_id;
    silent.stream_kind = StreamKind::mixed;
    silent.tokens.shape = {0, 1};
    const AudioFeatures& audio = input.audio ? *input.audio : silent;
    const PooledAudio pooled = pool_audio(audio, config.audio_budget);
    return assemble(compressed, pooled, *active, input.record.query, prompt, assemble_config);
}

PipelineResult run_pipeline(std::span<const ManifestRecord> records,
                            const std::filesystem::path& manifest_path,
                            const PipelineConfig& config,
                            const std::filesystem::path& out_dir) {
    if (records.empty()) throw Error(ErrorCode::EmptyDataset, "manifest has no records");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError,
                    "cannot create output directory '" + out_dir.string() + "': " + ec.message());
    }

    const std::size_t count = records.size();
    PipelineResult result;
    result.outcomes.resize(count);

    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(count));

    // Workers claim records by atomic index and own them end-to-end (load,
    // run, write the sequence file); outcomes land in a preallocated slot per
    // record, so no queue or lock is needed.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            RecordOutcome& outcome = result.outcomes[i];
            outcome.qid = records[i].qid;
            outcome.video_id = records[i].video_id;
            try {
                const LoadedRecord loaded = load_record(records[i], manifest_path);
                CompressionReport report;
                const PromptSequence seq =
                    run_record(loaded, config, static_cast<std::int64_t>(i), &report);
                const std::filesystem::path seq_path = out_dir / (records[i].qid + ".seq");
                std::ofstream out(seq_path, std::ios::trunc);
                if (!out) {
                    throw Error(ErrorCode::IoError, "cannot write '" + seq_path.string() + "'");
                }
                out << serialize_sequence(seq);
                if (!out.good()) {
                    throw Error(ErrorCode::IoError, "write failed for '" + seq_path.string() + "'");
                }
                outcome.ok = true;
                outcome.report = report;
                outcome.stats = seq.stats;
            } catch (const std::exception& e) {
                outcome.ok = false;
                outcome.error = e.what();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    // Single ordered writer for the per-record report rows.
    const std::filesystem::path csv_path = out_dir / "reports.csv";
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw Error(ErrorCode::IoError, "cannot write '" + csv_path.string() + "'");
    csv << "qid,video_id,retained,uncompressed,ratio,frames_kept,sequence_len\n";
    for (const RecordOutcome& outcome : result.outcomes) {
        if (!outcome.ok) {
            ++result.n_failed;
            continue;
        }
        char ratio_buf[32];
        std::snprintf(ratio_buf, sizeof ratio_buf, "%.6f", outcome.report.ratio);
        csv << outcome.qid << ',' << outcome.video_id << ',' << outcome.report.retained << ','
            << outcome.report.uncompressed << ',' << ratio_buf << ',' << outcome.stats.n_time
            << ',' << outcome.stats.total_len << '\n';
    }
    if (!csv.good()) throw Error(ErrorCode::IoError, "report write failed");
    return result;
}

}  // namespace shotkit
