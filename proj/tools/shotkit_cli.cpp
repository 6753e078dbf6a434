// Command line front end: synthetic data generation, shot segmentation,
// token compression, prompt assembly, prediction parsing, metric evaluation,
// and hyperparameter sweeps.  Exit codes: 0 full success, 1 partial failure
// (some records/grid points failed), 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shotkit/shotkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

// Writes `text` to `path`, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw shotkit::Error(shotkit::ErrorCode::IoError, "cannot open " + path);
    out << text;
}

shotkit::VideoFeatures load_video_tensor(const std::string& path) {
    shotkit::VideoFeatures video;
    video.video_id = path;
    video.frame_features = shotkit::read_tensor(path);
    if (video.frame_features.shape.size() != 3) {
        throw shotkit::Error(shotkit::ErrorCode::ShapeMismatch,
                             path + ": expected a rank-3 [frames, positions, dim] tensor");
    }
    const auto n = video.frame_features.shape[0];
    video.duration_s = static_cast<double>(n);
    video.frame_timestamps_s.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        video.frame_timestamps_s[static_cast<std::size_t>(i)] = static_cast<double>(i) + 0.5;
    }
    return video;
}

struct PipelineFlags {
    shotkit::PipelineConfig config;
    std::string keyframe_scope = "global";
    std::string sample_mode = "uniform";
    std::string strategy = "overall";
    std::string time_style = "int_seconds";
    std::string threshold_mode = "adaptive";
    bool detect_shots_flag = false;

    void add_visual(CLI::App& cmd) {
        cmd.add_option("--n-frames", config.n_frames, "frame sample budget N");
        cmd.add_option("--k", config.k, "keyframe budget k");
        cmd.add_option("--rho", config.rho, "retained fraction of positions per non-keyframe");
        cmd.add_option("--smooth-sigma", config.smooth_sigma,
                       "gaussian sigma for keyframe motion scoring");
        cmd.add_option("--keyframe-scope", keyframe_scope, "keyframe budget scope")
            ->check(CLI::IsMember({"global", "per-shot"}));
        cmd.add_option("--sample-mode", sample_mode, "frame subsampling mode")
            ->check(CLI::IsMember({"uniform", "seeded_random"}));
        cmd.add_option("--seed", config.seed, "seed for all randomized stages");
        cmd.add_flag("--detect-shots", detect_shots_flag,
                     "ignore manifest shot boundaries and detect from motion");
        cmd.add_option("--detect-sigma", config.shot_detect.sigma,
                       "gaussian sigma applied to motion before thresholding");
        cmd.add_option("--threshold-mode", threshold_mode, "cut threshold mode")
            ->check(CLI::IsMember({"adaptive", "fixed"}));
        cmd.add_option("--fixed-threshold", config.shot_detect.fixed_threshold,
                       "cut threshold when --threshold-mode=fixed");
        cmd.add_option("--k-sigma", config.shot_detect.k_sigma,
                       "adaptive threshold = mean + k_sigma * std");
        cmd.add_option("--min-shot-len", config.shot_detect.min_shot_len,
                       "shots shorter than this merge into a neighbour");
    }

    void add_assembly(CLI::App& cmd) {
        cmd.add_option("--audio-budget", config.audio_budget, "audio token budget L");
        cmd.add_option("--strategy", strategy, "prompt composition strategy")
            ->check(CLI::IsMember({"overall", "interleaved", "dual_stream"}));
        cmd.add_option("--time-style", time_style, "timestamp token format")
            ->check(CLI::IsMember({"int_seconds", "two_decimals"}));
        cmd.add_option("--prompt-text", config.prompt_text,
                       "instruction text (empty selects the built-in default)");
        cmd.add_option("--threads", config.threads, "worker threads (0 = hardware)");
    }

    shotkit::PipelineConfig resolve() const {
        shotkit::PipelineConfig out = config;
        out.keyframe_scope = keyframe_scope == "per-shot"
                                 ? shotkit::KeyframeScope::per_shot_quota
                                 : shotkit::KeyframeScope::global_topk;
        out.sample_mode = sample_mode == "seeded_random" ? shotkit::SampleMode::seeded_random
                                                         : shotkit::SampleMode::uniform;
        out.strategy = shotkit::strategy_from_name(strategy);
        out.time_style = shotkit::time_style_from_name(time_style);
        out.shot_detect.threshold_mode =
            threshold_mode == "fixed" ? shotkit::ShotDetectConfig::ThresholdMode::fixed
                                      : shotkit::ShotDetectConfig::ThresholdMode::adaptive;
        out.use_imported_shots = !detect_shots_flag;
        return out;
    }
};

int cmd_gen_synthetic(const shotkit::SyntheticSpec& spec, const std::string& out_dir) {
    const shotkit::SyntheticDataset dataset = shotkit::generate_dataset(spec, out_dir);
    std::cerr << "wrote " << dataset.records.size() << " records to " << dataset.manifest_path
              << "\n";
    return kExitOk;
}

int cmd_segment_shots(const std::string& visual, const PipelineFlags& flags,
                      const std::string& out) {
    const shotkit::VideoFeatures video = load_video_tensor(visual);
    const shotkit::PipelineConfig config = flags.resolve();
    const shotkit::ShotList shots = shotkit::detect_shots(video, config.shot_detect);
    std::ostringstream text;
    for (int boundary : shotkit::shot_boundaries(shots)) text << boundary << "\n";
    emit(out, text.str());
    std::cerr << shots.n_shots() << " shots over " << shots.n_frames() << " frames\n";
    return kExitOk;
}

int cmd_compress(const std::string& manifest_path, const PipelineFlags& flags,
                 const std::string& out) {
    const auto records = shotkit::read_manifest(manifest_path);
    const shotkit::PipelineConfig config = flags.resolve();
    std::ostringstream csv;
    csv << "qid,video_id,retained,uncompressed,ratio\n";
    int failed = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            const shotkit::LoadedRecord loaded = shotkit::load_record(records[i], manifest_path);
            const shotkit::CompressionReport report =
                shotkit::compress_record(loaded, config, static_cast<std::int64_t>(i));
            char ratio[32];
            std::snprintf(ratio, sizeof(ratio), "%.6f", report.ratio);
            csv << records[i].qid << ',' << records[i].video_id << ',' << report.retained << ','
                << report.uncompressed << ',' << ratio << "\n";
        } catch (const shotkit::Error& e) {
            ++failed;
            std::cerr << records[i].qid << ": " << e.what() << "\n";
        }
    }
    emit(out, csv.str());
    if (failed > 0) {
        std::cerr << failed << "/" << records.size() << " records failed\n";
        return kExitPartial;
    }
    return kExitOk;
}

int cmd_assemble(const std::string& manifest_path, const PipelineFlags& flags,
                 const std::string& out_dir) {
    const auto records = shotkit::read_manifest(manifest_path);
    const shotkit::PipelineConfig config = flags.resolve();
    const shotkit::PipelineResult result =
        shotkit::run_pipeline(records, manifest_path, config, out_dir);
    for (const shotkit::RecordOutcome& outcome : result.outcomes) {
        if (!outcome.ok) std::cerr << outcome.qid << ": " << outcome.error << "\n";
    }
    std::cerr << (result.outcomes.size() - static_cast<std::size_t>(result.n_failed)) << "/"
              << result.outcomes.size() << " sequences written to " << out_dir << "\n";
    return result.n_failed > 0 ? kExitPartial : kExitOk;
}

int cmd_parse_predictions(const std::string& in_path, const std::string& out_path,
                          const std::string& manifest_path, bool strict) {
    std::map<std::string, double> durations;
    if (!manifest_path.empty()) {
        for (const auto& rec : shotkit::read_manifest(manifest_path)) {
            durations[rec.qid] = rec.duration_s;
        }
    }
    const auto raw = shotkit::read_raw_predictions(in_path);
    std::vector<shotkit::PredictionRecord> parsed;
    parsed.reserve(raw.size());
    int failed = 0;
    for (const shotkit::RawPrediction& line : raw) {
        shotkit::PredictionRecord rec;
        rec.qid = line.qid;
        const auto it = durations.find(line.qid);
        const double duration = it == durations.end() ? 0.0 : it->second;
        try {
            shotkit::MomentList list = shotkit::parse_moments(line.raw, duration, strict);
            rec.moments = std::move(list.moments);
            rec.repairs_applied = std::move(list.repairs_applied);
        } catch (const shotkit::Error& e) {
            ++failed;
            std::cerr << line.qid << ": " << e.what() << "\n";
        }
        parsed.push_back(std::move(rec));
    }
    shotkit::write_predictions(parsed, out_path);
    std::cerr << (parsed.size() - static_cast<std::size_t>(failed)) << "/" << parsed.size()
              << " outputs parsed\n";
    return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& predictions_path,
                 const shotkit::EvaluateOptions& options, const std::string& format,
                 const std::string& out) {
    const auto records = shotkit::read_manifest(manifest_path);
    const auto predictions = shotkit::read_predictions(predictions_path);
    std::map<std::string, const shotkit::PredictionRecord*> by_qid;
    for (const auto& p : predictions) by_qid[p.qid] = &p;

    std::vector<shotkit::QueryResult> results;
    results.reserve(records.size());
    int missing = 0;
    for (const auto& rec : records) {
        shotkit::QueryResult r;
        r.qid = rec.qid;
        r.ground_truth = rec.moments;
        const auto it = by_qid.find(rec.qid);
        if (it == by_qid.end()) {
            ++missing;  // scored as a miss, not dropped
        } else {
            r.predictions = it->second->moments;
            by_qid.erase(it);
        }
        results.push_back(std::move(r));
    }
    if (missing > 0) std::cerr << missing << " queries had no prediction (scored as misses)\n";
    for (const auto& [qid, unused] : by_qid) {
        std::cerr << "prediction for unknown qid ignored: " << qid << "\n";
    }

    const shotkit::MetricReport report = shotkit::evaluate(results, options);
    emit(out, format == "markdown" ? shotkit::report_markdown(report)
                                   : shotkit::report_csv(report));
    return kExitOk;
}

int cmd_sweep(const std::string& manifest_path, const shotkit::SweepGrid& grid,
              shotkit::SweepOptions options, const std::string& out) {
    const auto records = shotkit::read_manifest(manifest_path);
    const shotkit::SweepResult result = shotkit::run_sweep(records, manifest_path, grid, options);
    for (const std::string& note : result.skipped) std::cerr << "skipped: " << note << "\n";
    emit(out, shotkit::sweep_csv(result.rows));
    return result.skipped.empty() ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shot-aware token compression toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the verb
    app.set_config("--config", "", "declarative config file (INI/TOML); command-line flags win");
    app.get_config_ptr()->configurable(false);

    // --- gen-synthetic ---------------------------------------------------
    auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic dataset with known structure")->configurable();
    shotkit::SyntheticSpec spec;
    std::string gen_out_dir;
    gen->add_option("--out-dir", gen_out_dir, "directory for tensors + manifest.jsonl + truth.json")
        ->required();
    gen->add_option("--n-videos", spec.n_videos, "number of videos (0 = empty manifest)");
    gen->add_option("--n-frames", spec.n_frames, "frames per video");
    gen->add_option("--n-positions", spec.n_positions, "token positions per frame (Q)");
    gen->add_option("--feat-dim", spec.feat_dim, "feature dimension (D)");
    gen->add_option("--shots", spec.shots_per_video, "planted shots per video");
    gen->add_option("--min-shot-frames", spec.min_shot_frames, "minimum planted shot length");
    gen->add_option("--noise-sigma", spec.noise_sigma, "per-entry gaussian noise");
    gen->add_option("--cut-magnitude", spec.cut_magnitude, "L2 jump between shot prototypes");
    gen->add_option("--planted-positions", spec.planted_dynamic_positions,
                    "positions given a temporal ramp inside every shot")->delimiter(',');
    gen->add_option("--ramp-amplitude", spec.ramp_amplitude,
                    "ramp height (<= 0 picks one that dominates the noise)");
    gen->add_option("--fps", spec.fps, "frame rate for timestamps");
    gen->add_option("--gt-windows", spec.gt_windows, "ground-truth moments per query");
    gen->add_option("--audio-tokens", spec.audio_tokens, "audio tokens per video (0 = none)");
    gen->add_option("--audio-dim", spec.audio_dim, "audio feature dimension");
    gen->add_flag("--dual-audio", spec.dual_audio, "write voice + ambient instead of mixed");
    gen->add_option("--seed", spec.seed, "generator seed");

    // --- segment-shots ---------------------------------------------------
    auto* segment = app.add_subcommand("segment-shots", "detect shot boundaries in a feature tensor")->configurable();
    std::string segment_visual, segment_out;
    PipelineFlags segment_flags;
    segment->add_option("--visual", segment_visual, "rank-3 [frames, positions, dim] tensor file")
        ->required();
    segment->add_option("--out", segment_out, "boundary list output (one index per line; - = stdout)");
    segment->add_option("--detect-sigma", segment_flags.config.shot_detect.sigma,
                        "gaussian sigma applied to motion before thresholding");
    segment->add_option("--threshold-mode", segment_flags.threshold_mode, "cut threshold mode")
        ->check(CLI::IsMember({"adaptive", "fixed"}));
    segment->add_option("--fixed-threshold", segment_flags.config.shot_detect.fixed_threshold,
                        "cut threshold when --threshold-mode=fixed");
    segment->add_option("--k-sigma", segment_flags.config.shot_detect.k_sigma,
                        "adaptive threshold = mean + k_sigma * std");
    segment->add_option("--min-shot-len", segment_flags.config.shot_detect.min_shot_len,
                        "shots shorter than this merge into a neighbour");

    // --- compress ----------------------------------------------------------
    auto* compress = app.add_subcommand("compress", "report compressed token counts per record")->configurable();
    std::string compress_manifest, compress_out;
    PipelineFlags compress_flags;
    compress->add_option("--manifest", compress_manifest, "JSONL manifest")->required();
    compress->add_option("--out", compress_out, "report CSV path (- = stdout)");
    compress_flags.add_visual(*compress);

    // --- assemble ----------------------------------------------------------
    auto* assemble = app.add_subcommand("assemble", "run the full pipeline and write prompt sequences")->configurable();
    std::string assemble_manifest, assemble_out_dir;
    PipelineFlags assemble_flags;
    assemble->add_option("--manifest", assemble_manifest, "JSONL manifest")->required();
    assemble->add_option("--out-dir", assemble_out_dir, "directory for <qid>.seq files + reports.csv")
        ->required();
    assemble_flags.add_visual(*assemble);
    assemble_flags.add_assembly(*assemble);

    // --- parse-predictions ---------------------------------------------------
    auto* parse = app.add_subcommand("parse-predictions", "parse raw model outputs into moment lists")->configurable();
    std::string parse_in, parse_out, parse_manifest;
    bool parse_strict = false;
    parse->add_option("--in", parse_in, "JSONL with {qid, raw} per line")->required();
    parse->add_option("--out", parse_out, "JSONL with {qid, moments, repairs} per line")->required();
    parse->add_option("--manifest", parse_manifest,
                      "optional manifest; provides per-query durations for clamping");
    parse->add_flag("--strict", parse_strict, "reject malformed outputs instead of repairing");

    // --- evaluate ----------------------------------------------------------
    auto* evaluate = app.add_subcommand("evaluate", "score predictions against manifest ground truth")->configurable();
    std::string eval_manifest, eval_predictions, eval_format = "csv", eval_out;
    shotkit::EvaluateOptions eval_options;
    evaluate->add_option("--manifest", eval_manifest, "JSONL manifest with ground truth")->required();
    evaluate->add_option("--predictions", eval_predictions, "predictions JSONL")->required();
    evaluate->add_option("--r1-taus", eval_options.r1_taus, "IoU thresholds for R1")->delimiter(',');
    evaluate->add_option("--map-taus", eval_options.map_taus, "IoU thresholds for mAP")->delimiter(',');
    evaluate->add_flag("--map-avg-band", eval_options.map_avg_band,
                       "also report mAP averaged over 0.50:0.05:0.95");
    evaluate->add_option("--format", eval_format, "report format")
        ->check(CLI::IsMember({"csv", "markdown"}));
    evaluate->add_option("--out", eval_out, "report path (- = stdout)");

    // --- sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "grid sweep over N/k/rho/L/strategy")->configurable();
    std::string sweep_manifest, sweep_out, sweep_source = "echo", sweep_pred_dir;
    std::vector<std::string> sweep_strategies = {"overall"};
    shotkit::SweepGrid grid;
    shotkit::SweepOptions sweep_options;
    PipelineFlags sweep_flags;
    sweep->add_option("--manifest", sweep_manifest, "JSONL manifest")->required();
    sweep->add_option("--grid-n", grid.n_values, "frame sample counts")->delimiter(',');
    sweep->add_option("--grid-k", grid.k_values, "keyframe budgets")->delimiter(',');
    sweep->add_option("--grid-rho", grid.rho_values, "retention fractions")->delimiter(',');
    sweep->add_option("--grid-l", grid.l_values, "audio budgets")->delimiter(',');
    sweep->add_option("--grid-strategy", sweep_strategies, "composition strategies")
        ->delimiter(',')
        ->check(CLI::IsMember({"overall", "interleaved", "dual_stream"}));
    sweep->add_option("--source", sweep_source, "where predictions come from")
        ->check(CLI::IsMember({"echo", "jitter", "files"}));
    sweep->add_option("--jitter-iou", sweep_options.jitter_iou,
                      "target IoU for the jitter stub (1.0 = echo)");
    sweep->add_option("--predictions-dir", sweep_pred_dir,
                      "directory of <N>_<k>_<rho>_<L>_<strategy>.jsonl files (files mode)");
    sweep->add_option("--out", sweep_out, "CSV path (- = stdout)");
    sweep->add_option("--seed", sweep_flags.config.seed, "seed for all randomized stages");
    sweep->add_option("--smooth-sigma", sweep_flags.config.smooth_sigma,
                      "gaussian sigma for keyframe motion scoring");
    sweep->add_flag("--detect-shots", sweep_flags.detect_shots_flag,
                    "ignore manifest shot boundaries and detect from motion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_synthetic(spec, gen_out_dir);
        if (segment->parsed()) return cmd_segment_shots(segment_visual, segment_flags, segment_out);
        if (compress->parsed()) return cmd_compress(compress_manifest, compress_flags, compress_out);
        if (assemble->parsed()) return cmd_assemble(assemble_manifest, assemble_flags, assemble_out_dir);
        if (parse->parsed()) {
            return cmd_parse_predictions(parse_in, parse_out, parse_manifest, parse_strict);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(eval_manifest, eval_predictions, eval_options, eval_format, eval_out);
        }
        if (sweep->parsed()) {
            sweep_options.source = sweep_source == "files"  ? shotkit::PredictionSource::files
                                   : sweep_source == "jitter" ? shotkit::PredictionSource::stub_jitter
                                                              : shotkit::PredictionSource::stub_echo;
            sweep_options.predictions_dir = sweep_pred_dir;
            sweep_options.base = sweep_flags.resolve();
            grid.strategies.clear();
            for (const std::string& name : sweep_strategies) {
                grid.strategies.push_back(shotkit::strategy_from_name(name));
            }
            return cmd_sweep(sweep_manifest, grid, sweep_options, sweep_out);
        }
    } catch (const shotkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
