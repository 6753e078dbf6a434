// Python bindings for the main operations: tensor IO, shot segmentation,
// keyframe selection, token compression, audio pooling, sequence assembly,
// prediction parsing, and the metric suite.  Arrays cross the boundary as
// numpy float32 (features) / float64 (derived series).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "shotkit/shotkit.hpp"

namespace py = pybind11;
using namespace shotkit;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

FeatureTensor tensor_from_array(const FloatArray& array) {
    FeatureTensor tensor;
    tensor.shape.assign(array.shape(), array.shape() + array.ndim());
    tensor.data.assign(array.data(), array.data() + array.size());
    return tensor;
}

py::array_t<float> array_from_tensor(const FeatureTensor& tensor) {
    py::array_t<float> out(tensor.shape);
    std::copy(tensor.data.begin(), tensor.data.end(), out.mutable_data());
    return out;
}

py::array_t<double> array_from_vector(const std::vector<double>& values) {
    py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

// A video from a [N, Q, D] array; timestamps default to frame centers over
// the duration.
VideoFeatures video_from_array(const FloatArray& array, double duration_s) {
    if (array.ndim() != 3) {
        throw Error(ErrorCode::ShapeMismatch, "expected a [frames, positions, dim] array");
    }
    VideoFeatures video;
    video.video_id = "array";
    video.frame_features = tensor_from_array(array);
    const auto n = video.frame_features.shape[0];
    video.duration_s = duration_s > 0.0 ? duration_s : static_cast<double>(n);
    video.frame_timestamps_s.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        video.frame_timestamps_s[static_cast<std::size_t>(i)] =
            (static_cast<double>(i) + 0.5) * video.duration_s / static_cast<double>(n);
    }
    if (auto issue = validate_video_features(video)) raise(*issue);
    return video;
}

AudioFeatures audio_from_array(const FloatArray& array, StreamKind kind) {
    if (array.ndim() != 2) {
        throw Error(ErrorCode::ShapeMismatch, "expected a [tokens, dim] array");
    }
    AudioFeatures audio;
    audio.tokens = tensor_from_array(array);
    audio.stream_kind = kind;
    if (auto issue = validate_audio_features(audio)) raise(*issue);
    return audio;
}

ShotList shots_for(const VideoFeatures& video, const std::optional<std::vector<int>>& boundaries,
                   double detect_sigma) {
    if (boundaries) return import_shots(*boundaries, static_cast<int>(video.n_frames()));
    ShotDetectConfig config;
    config.sigma = detect_sigma;
    return detect_shots(video, config);
}

KeyframeScope scope_from_name(const std::string& name) {
    if (name == "global") return KeyframeScope::global_topk;
    if (name == "per-shot") return KeyframeScope::per_shot_quota;
    throw Error(ErrorCode::BadConfig, "unknown keyframe scope '" + name + "'");
}

std::vector<Moment> moments_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Moment> out;
    out.reserve(pairs.size());
    for (const auto& [s, e] : pairs) out.push_back({s, e});
    return out;
}

}  // namespace

PYBIND11_MODULE(_shotkit, m) {
    m.doc() = "shot-aware token compression toolkit";

    m.def(
        "read_tensor", [](const std::string& path) { return array_from_tensor(read_tensor(path)); },
        py::arg("path"), "Read a binary tensor file into a float32 array.");

    m.def(
        "write_tensor",
        [](const FloatArray& array, const std::string& path) {
            write_tensor(tensor_from_array(array), path);
        },
        py::arg("array"), py::arg("path"), "Write a float32 array as a binary tensor file.");

    m.def(
        "frame_deltas",
        [](const FloatArray& visual) {
            const VideoFeatures video = video_from_array(visual, 0.0);
            return array_from_vector(frame_deltas(video));
        },
        py::arg("visual"), "Frame-to-frame L2 motion magnitudes of a [N, Q, D] array.");

    m.def(
        "gaussian_smooth",
        [](const DoubleArray& signal, double sigma) {
            if (signal.ndim() != 1) {
                throw Error(ErrorCode::ShapeMismatch, "expected a 1-D signal");
            }
            const std::vector<double> in(signal.data(), signal.data() + signal.size());
            return array_from_vector(gaussian_smooth(in, sigma));
        },
        py::arg("signal"), py::arg("sigma"),
        "Gaussian smoothing with reflect padding; sigma 0 is the identity.");

    m.def(
        "detect_shots",
        [](const FloatArray& visual, double sigma, double k_sigma, int min_shot_len) {
            const VideoFeatures video = video_from_array(visual, 0.0);
            ShotDetectConfig config;
            config.sigma = sigma;
            config.k_sigma = k_sigma;
            config.min_shot_len = min_shot_len;
            std::vector<std::pair<int, int>> spans;
            for (const ShotSpan& s : detect_shots(video, config).spans) {
                spans.emplace_back(s.first_frame, s.last_frame);
            }
            return spans;
        },
        py::arg("visual"), py::arg("sigma") = 0.0, py::arg("k_sigma") = 3.0,
        py::arg("min_shot_len") = 2,
        "Adaptive-threshold shot segmentation; returns [first, last] frame spans.");

    m.def(
        "select_keyframes",
        [](const FloatArray& visual, int k, double smooth_sigma,
           const std::optional<std::vector<int>>& boundaries, const std::string& scope) {
            const VideoFeatures video = video_from_array(visual, 0.0);
            const ShotList shots = shots_for(video, boundaries, 0.0);
            const MotionSeries series = motion_series(video, smooth_sigma);
            return select_keyframes(series, shots, k, scope_from_name(scope)).indices;
        },
        py::arg("visual"), py::arg("k"), py::arg("smooth_sigma") = 1.0,
        py::arg("boundaries") = py::none(), py::arg("scope") = "global",
        "Top-k keyframes by smoothed motion plus one anchor per uncovered shot.");

    m.def(
        "plan_variance",
        [](const FloatArray& visual, const std::optional<std::vector<int>>& boundaries,
           double rho) {
            const VideoFeatures video = video_from_array(visual, 0.0);
            const ShotList shots = shots_for(video, boundaries, 0.0);
            const VariancePlan plan = plan_variance(video, shots, rho);
            py::list out;
            for (const ShotVariance& sv : plan.per_shot) {
                py::dict d;
                d["shot"] = py::make_tuple(sv.shot.first_frame, sv.shot.last_frame);
                d["variance"] = sv.position_variance;
                d["retained"] = sv.retained_positions;
                out.append(d);
            }
            return out;
        },
        py::arg("visual"), py::arg("boundaries") = py::none(), py::arg("rho") = 0.25,
        "Per-shot position variances and the retained top-m position sets.");

    m.def(
        "compress",
        [](const FloatArray& visual, int k, double rho, double smooth_sigma,
           const std::optional<std::vector<int>>& boundaries, const std::string& scope) {
            const VideoFeatures video = video_from_array(visual, 0.0);
            const ShotList shots = shots_for(video, boundaries, 0.0);
            const MotionSeries series = motion_series(video, smooth_sigma);
            const KeyframeSet keyframes =
                select_keyframes(series, shots, k, scope_from_name(scope));
            const VariancePlan plan = plan_variance(video, shots, rho);
            const CompressedVisual compressed = compress(video, keyframes, plan);
            const CompressionReport report = compression_report(compressed.selection);

            const auto& sel = compressed.selection;
            py::array_t<bool> mask({py::ssize_t(sel.n_frames), py::ssize_t(sel.n_positions)});
            for (py::ssize_t i = 0; i < mask.size(); ++i) {
                mask.mutable_data()[i] = sel.mask[static_cast<std::size_t>(i)] != 0;
            }
            py::dict out;
            out["tokens"] = array_from_tensor(compressed.tokens);
            out["mask"] = mask;
            out["provenance"] = sel.provenance;
            out["keyframes"] = keyframes.indices;
            out["retained"] = report.retained;
            out["uncompressed"] = report.uncompressed;
            out["ratio"] = report.ratio;
            return out;
        },
        py::arg("visual"), py::arg("k"), py::arg("rho") = 0.25, py::arg("smooth_sigma") = 1.0,
        py::arg("boundaries") = py::none(), py::arg("scope") = "global",
        "Two-stage token compression of a [N, Q, D] array; keyframes keep every "
        "position, other frames keep their shot's top-m variance positions.");

    m.def(
        "pool_audio",
        [](const FloatArray& audio, std::int64_t budget) {
            return array_from_tensor(
                pool_audio(audio_from_array(audio, StreamKind::mixed), budget).tokens);
        },
        py::arg("audio"), py::arg("budget") = 150,
        "Average-pool [T, D] audio tokens down to min(T, budget) bins.");

    m.def(
        "build_sequence",
        [](const FloatArray& visual, double duration_s, const std::string& query, int k,
           double rho, const std::optional<FloatArray>& audio,
           const std::optional<FloatArray>& voice, const std::optional<FloatArray>& ambient,
           std::int64_t l_budget, const std::string& strategy, const std::string& time_style,
           const std::string& prompt, double smooth_sigma,
           const std::optional<std::vector<int>>& boundaries) {
            const VideoFeatures video = video_from_array(visual, duration_s);
            const ShotList shots = shots_for(video, boundaries, 0.0);
            const MotionSeries series = motion_series(video, smooth_sigma);
            const KeyframeSet keyframes = select_keyframes(series, shots, k);
            const VariancePlan plan = plan_variance(video, shots, rho);
            const CompressedVisual compressed = compress(video, keyframes, plan);

            AssembleConfig config;
            config.strategy = strategy_from_name(strategy);
            config.time_style = time_style_from_name(time_style);
            const std::string prompt_text = prompt.empty() ? default_prompt_text() : prompt;

            PromptSequence sequence;
            if (config.strategy == Strategy::dual_stream) {
                if (!voice || !ambient) {
                    throw Error(ErrorCode::InconsistentInputs,
                                "dual_stream needs voice and ambient arrays");
                }
                const auto pooled = pool_dual(audio_from_array(*voice, StreamKind::voice),
                                              audio_from_array(*ambient, StreamKind::ambient),
                                              l_budget);
                sequence = assemble_dual(compressed, pooled.first, pooled.second, video, query,
                                         prompt_text, config);
            } else {
                AudioFeatures mixed;
                if (audio) {
                    mixed = audio_from_array(*audio, StreamKind::mixed);
                } else {
                    mixed.tokens.shape = {0, 1};  // silent stream pools to nothing
                }
                sequence =
                    assemble(compressed, pool_audio(mixed, l_budget), video, query, prompt_text,
                             config);
            }
            return serialize_sequence(sequence);
        },
        py::arg("visual"), py::arg("duration_s"), py::arg("query"), py::arg("k") = 32,
        py::arg("rho") = 0.25, py::arg("audio") = py::none(), py::arg("voice") = py::none(),
        py::arg("ambient") = py::none(), py::arg("l_budget") = 150,
        py::arg("strategy") = "overall", py::arg("time_style") = "int_seconds",
        py::arg("prompt") = "", py::arg("smooth_sigma") = 1.0,
        py::arg("boundaries") = py::none(),
        "Full single-video pipeline: compress, pool, assemble, serialize.");

    m.def(
        "parse_moments",
        [](const std::string& text, double duration_s, bool strict) {
            const MomentList list = parse_moments(text, duration_s, strict);
            std::vector<std::pair<double, double>> moments;
            for (const Moment& mo : list.moments) moments.emplace_back(mo.start_s, mo.end_s);
            return py::make_tuple(moments, list.repairs_applied);
        },
        py::arg("text"), py::arg("duration_s") = 0.0, py::arg("strict") = false,
        "Parse '[[s, e], ...]' model output; returns (moments, repairs_applied).");

    m.def(
        "temporal_iou",
        [](std::pair<double, double> a, std::pair<double, double> b) {
            return temporal_iou({a.first, a.second}, {b.first, b.second});
        },
        py::arg("a"), py::arg("b"), "Intersection-over-union of two [start, end] segments.");

    m.def(
        "evaluate",
        [](const std::vector<std::pair<std::vector<std::pair<double, double>>,
                                       std::vector<std::pair<double, double>>>>& results,
           const std::vector<double>& r1_taus, const std::vector<double>& map_taus,
           bool map_avg_band) {
            std::vector<QueryResult> qr;
            qr.reserve(results.size());
            for (std::size_t i = 0; i < results.size(); ++i) {
                QueryResult r;
                r.qid = std::to_string(i);
                r.predictions = moments_from_pairs(results[i].first);
                r.ground_truth = moments_from_pairs(results[i].second);
                qr.push_back(std::move(r));
            }
            EvaluateOptions options;
            options.r1_taus = r1_taus;
            options.map_taus = map_taus;
            options.map_avg_band = map_avg_band;
            const MetricReport report = evaluate(qr, options);

            py::dict out;
            char key[32];
            for (const auto& [tau, v] : report.r1) {
                std::snprintf(key, sizeof key, "R1@%g", tau);
                out[key] = v;
            }
            for (const auto& [tau, v] : report.map) {
                std::snprintf(key, sizeof key, "mAP@%g", tau);
                out[key] = v;
            }
            if (report.map_avg) out["mAP@avg"] = *report.map_avg;
            out["mIoU"] = report.miou;
            out["n_queries"] = report.n_queries;
            return out;
        },
        py::arg("results"), py::arg("r1_taus") = std::vector<double>{0.5, 0.7},
        py::arg("map_taus") = std::vector<double>{0.5, 0.75}, py::arg("map_avg_band") = false,
        "Score (predictions, ground_truth) pairs; returns a metric dict.");

    // The library's error type surfaces as ValueError with the code prefix
    // kept in the message.
    py::register_exception<Error>(m, "ShotkitError", PyExc_ValueError);
}
