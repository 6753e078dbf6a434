#include "shotkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "shotkit/tensor_io.hpp"

namespace shotkit {

namespace {

void require_spec(const SyntheticSpec& spec) {
    if (spec.n_videos < 0) throw Error(ErrorCode::BadConfig, "n_videos must be >= 0");
    if (spec.n_frames < 1) throw Error(ErrorCode::BadConfig, "n_frames must be >= 1");
    if (spec.n_positions < 1 || spec.feat_dim < 1) {
        throw Error(ErrorCode::BadConfig, "positions and feature dims must be >= 1");
    }
    if (spec.shots_per_video < 1) throw Error(ErrorCode::BadConfig, "shots_per_video must be >= 1");
    if (spec.min_shot_frames < 1) throw Error(ErrorCode::BadConfig, "min_shot_frames must be >= 1");
    if (spec.shots_per_video * spec.min_shot_frames > spec.n_frames) {
        throw Error(ErrorCode::BadConfig,
                    "cannot fit " + std::to_string(spec.shots_per_video) + " shots of >= " +
                        std::to_string(spec.min_shot_frames) + " frames into " +
                        std::to_string(spec.n_frames) + " frames");
    }
    if (spec.noise_sigma < 0.0) throw Error(ErrorCode::BadConfig, "noise_sigma must be >= 0");
    if (spec.cut_magnitude <= 0.0) throw Error(ErrorCode::BadConfig, "cut_magnitude must be > 0");
    for (int p : spec.planted_dynamic_positions) {
        if (p < 0 || p >= spec.n_positions) {
            throw Error(ErrorCode::BadConfig,
                        "planted position " + std::to_string(p) + " outside [0, " +
                            std::to_string(spec.n_positions - 1) + "]");
        }
    }
    if (!(spec.fps > 0.0)) throw Error(ErrorCode::BadConfig, "fps must be > 0");
    if (spec.gt_windows < 1) throw Error(ErrorCode::BadConfig, "gt_windows must be >= 1");
    if (spec.audio_tokens < 0 || spec.audio_dim < 1) {
        throw Error(ErrorCode::BadConfig, "bad audio geometry");
    }
}

// Shot lengths: an even split of the frame budget plus seeded jitter that
// never dips a shot below min_shot_frames.
std::vector<ShotSpan> plan_shots(const SyntheticSpec& spec, Rng& rng) {
    const int c = spec.shots_per_video;
    const int n = spec.n_frames;
    std::vector<int> lengths(static_cast<std::size_t>(c), 0);
    for (int i = 0; i < c; ++i) lengths[static_cast<std::size_t>(i)] = n / c + (i < n % c ? 1 : 0);
    // Randomly move slack between adjacent shots to vary the boundaries.
    for (int round = 0; round < 2 * c; ++round) {
        const int i = static_cast<int>(rng.uniform_int(0, c - 1));
        const int j = static_cast<int>(rng.uniform_int(0, c - 1));
        if (i == j) continue;
        const int give = static_cast<int>(
            rng.uniform_int(0, lengths[static_cast<std::size_t>(i)] - spec.min_shot_frames));
        lengths[static_cast<std::size_t>(i)] -= give;
        lengths[static_cast<std::size_t>(j)] += give;
    }
    std::vector<ShotSpan> shots;
    int start = 0;
    for (int i = 0; i < c; ++i) {
        const int len = lengths[static_cast<std::size_t>(i)];
        shots.push_back({start, start + len - 1});
        start += len;
    }
    return shots;
}

}  // namespace

SyntheticVideo make_synthetic_video(const SyntheticSpec& spec, const std::string& video_id,
                                    Rng& rng) {
    require_spec(spec);
    const int n = spec.n_frames;
    const std::int64_t q = spec.n_positions;
    const std::int64_t d = spec.feat_dim;
    const std::int64_t block = q * d;

    SyntheticVideo out;
    out.truth.video_id = video_id;
    out.truth.shots = plan_shots(spec, rng);
    out.truth.planted_positions = spec.planted_dynamic_positions;
    for (std::size_t i = 1; i < out.truth.shots.size(); ++i) {
        out.truth.cut_frames.push_back(out.truth.shots[i].first_frame);
    }
    // The frame-delta spikes sit exactly on the cut frames, so those are the
    // motion argmaxes keyframe selection should find first on clean data.
    out.truth.keyframes = out.truth.cut_frames;

    // Prototype chain: each shot's base vector jumps cut_magnitude (L2) away
    // from the previous one along a random direction.
    std::vector<double> proto(static_cast<std::size_t>(block));
    for (double& v : proto) v = rng.uniform() * 2.0 - 1.0;
    std::vector<std::vector<double>> prototypes;
    prototypes.push_back(proto);
    for (std::size_t s = 1; s < out.truth.shots.size(); ++s) {
        std::vector<double> dir(static_cast<std::size_t>(block));
        double norm_sq = 0.0;
        for (double& v : dir) {
            v = rng.normal();
            norm_sq += v * v;
        }
        const double scale = spec.cut_magnitude / std::sqrt(std::max(norm_sq, 1e-300));
        std::vector<double> next = prototypes.back();
        for (std::int64_t j = 0; j < block; ++j) {
            next[static_cast<std::size_t>(j)] += dir[static_cast<std::size_t>(j)] * scale;
        }
        prototypes.push_back(std::move(next));
    }

    const double ramp_amp = spec.ramp_amplitude > 0.0
                                ? spec.ramp_amplitude
                                : std::max(1.0, 20.0 * spec.noise_sigma);

    VideoFeatures& video = out.video;
    video.video_id = video_id;
    video.frame_features.shape = {n, q, d};
    video.frame_features.data.resize(static_cast<std::size_t>(n) * block);
    video.duration_s = static_cast<double>(n) / spec.fps;
    video.frame_timestamps_s.resize(static_cast<std::size_t>(n));
    for (int f = 0; f < n; ++f) {
        video.frame_timestamps_s[static_cast<std::size_t>(f)] = (f + 0.5) / spec.fps;
    }

    std::vector<char> is_planted(static_cast<std::size_t>(q), 0);
    for (int p : spec.planted_dynamic_positions) is_planted[static_cast<std::size_t>(p)] = 1;

    for (std::size_t s = 0; s < out.truth.shots.size(); ++s) {
        const ShotSpan shot = out.truth.shots[s];
        const std::vector<double>& base = prototypes[s];
        const int len = shot.length();
        for (int f = shot.first_frame; f <= shot.last_frame; ++f) {
            float* row = video.frame_features.data.data() +
                         static_cast<std::int64_t>(f) * block;
            // Linear ramp from -amp/2 to +amp/2 across the shot (flat when
            // the shot has a single frame).
            const double phase =
                len > 1 ? (static_cast<double>(f - shot.first_frame) / (len - 1) - 0.5) : 0.0;
            for (std::int64_t p = 0; p < q; ++p) {
                const double ramp = is_planted[static_cast<std::size_t>(p)] ? ramp_amp * phase : 0.0;
                for (std::int64_t j = 0; j < d; ++j) {
                    double v = base[static_cast<std::size_t>(p * d + j)] + ramp;
                    if (spec.noise_sigma > 0.0) v += rng.normal(0.0, spec.noise_sigma);
                    row[p * d + j] = static_cast<float>(v);
                }
            }
        }
    }
    return out;
}

SyntheticDataset generate_dataset(const SyntheticSpec& spec,
                                  const std::filesystem::path& out_dir) {
    require_spec(spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError,
                    "cannot create output directory '" + out_dir.string() + "': " + ec.message());
    }

    Rng rng(spec.seed);
    SyntheticDataset dataset;
    for (int v = 0; v < spec.n_videos; ++v) {
        char vid[32];
        std::snprintf(vid, sizeof vid, "vid%04d", v);
        SyntheticVideo video = make_synthetic_video(spec, vid, rng);

        const std::string tensor_name = std::string(vid) + ".stcf";
        write_tensor(video.video.frame_features, out_dir / tensor_name);

        ManifestRecord rec;
        rec.qid = std::string("q") + vid;
        rec.video_id = vid;
        rec.query = std::string("find the highlighted activity in ") + vid;
        rec.duration_s = video.video.duration_s;
        rec.visual_path = tensor_name;
        rec.shots_inline = video.truth.cut_frames;

        // Ground-truth windows: one per equal slice of the timeline so
        // multiple windows never overlap.
        const double dur = rec.duration_s;
        const double slot = dur / spec.gt_windows;
        const double min_len = std::min(0.5, slot * 0.25);
        for (int w = 0; w < spec.gt_windows; ++w) {
            const double lo = slot * w;
            const double hi = slot * (w + 1);
            double start = lo + rng.uniform() * (hi - lo - min_len);
            double end = start + min_len + rng.uniform() * (hi - start - min_len);
            start = std::max(0.0, std::min(start, dur));
            end = std::max(start, std::min(end, dur));
            rec.moments.push_back({start, end});
        }

        if (spec.audio_tokens > 0) {
            auto make_audio = [&](const char* suffix) {
                FeatureTensor tokens;
                tokens.shape = {spec.audio_tokens, spec.audio_dim};
                tokens.data.resize(static_cast<std::size_t>(spec.audio_tokens * spec.audio_dim));
                for (float& x : tokens.data) x = static_cast<float>(rng.normal());
                const std::string name = std::string(vid) + suffix;
                write_tensor(tokens, out_dir / name);
                return name;
            };
            if (spec.dual_audio) {
                rec.voice_path = make_audio(".voice.stcf");
                rec.ambient_path = make_audio(".ambient.stcf");
            } else {
                rec.audio_path = make_audio(".audio.stcf");
            }
        }

        dataset.records.push_back(std::move(rec));
        dataset.truth.push_back(std::move(video.truth));
    }

    dataset.manifest_path = out_dir / "manifest.jsonl";
    write_manifest(dataset.records, dataset.manifest_path);

    nlohmann::json truth_json = nlohmann::json::array();
    for (const PlantedTruth& t : dataset.truth) {
        nlohmann::json shots = nlohmann::json::array();
        for (const ShotSpan& s : t.shots) {
            shots.push_back(nlohmann::json::array({s.first_frame, s.last_frame}));
        }
        truth_json.push_back({{"video_id", t.video_id},
                              {"shots", shots},
                              {"cut_frames", t.cut_frames},
                              {"keyframes", t.keyframes},
                              {"planted_positions", t.planted_positions}});
    }
    std::ofstream truth_out(out_dir / "truth.json", std::ios::trunc);
    if (!truth_out) throw Error(ErrorCode::IoError, "cannot write truth sidecar");
    truth_out << nlohmann::json{{"videos", truth_json}}.dump(2) << '\n';
    return dataset;
}

}  // namespace shotkit
