#include "shotkit/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace shotkit {

std::int64_t SweepGrid::cardinality() const {
    return static_cast<std::int64_t>(n_values.size()) * static_cast<std::int64_t>(k_values.size()) *
           static_cast<std::int64_t>(rho_values.size()) *
           static_cast<std::int64_t>(l_values.size()) *
           static_cast<std::int64_t>(strategies.size());
}

Moment shrink_to_iou(const Moment& moment, double target_iou) {
    if (!(target_iou > 0.0) || target_iou > 1.0) {
        throw Error(ErrorCode::InvalidTau, "target IoU must be in (0, 1]");
    }
    // Shrinking [s, e] symmetrically by delta gives IoU (len - delta) / len,
    // so delta = len * (1 - target) hits the target exactly; degenerate
    // moments cannot be shrunk and pass through.
    const double len = moment.length();
    if (len <= 0.0) return moment;
    const double delta = len * (1.0 - target_iou);
    return {moment.start_s + delta / 2.0, moment.end_s - delta / 2.0};
}

namespace {

std::string format_rho(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", rho);
    return buf;
}

std::vector<Moment> stub_predictions(const std::vector<Moment>& ground_truth,
                                     PredictionSource source, double jitter_iou) {
    std::vector<Moment> preds;
    preds.reserve(ground_truth.size());
    for (const Moment& gt : ground_truth) {
        preds.push_back(source == PredictionSource::stub_jitter ? shrink_to_iou(gt, jitter_iou)
                                                                : gt);
    }
    return preds;
}

}  // namespace

std::string sweep_point_filename(int n, int k, double rho, std::int64_t l, Strategy strategy) {
    std::ostringstream name;
    name << n << '_' << k << '_' << format_rho(rho) << '_' << l << '_' << strategy_name(strategy)
         << ".jsonl";
    return name.str();
}

SweepResult run_sweep(std::span<const ManifestRecord> records,
                      const std::filesystem::path& manifest_path, const SweepGrid& grid,
                      const SweepOptions& options) {
    if (records.empty()) throw Error(ErrorCode::EmptyDataset, "manifest has no records");
    if (grid.n_values.empty() || grid.k_values.empty() || grid.rho_values.empty() ||
        grid.l_values.empty() || grid.strategies.empty()) {
        throw Error(ErrorCode::BadConfig, "every grid axis needs at least one value");
    }

    // Tensors are reused across grid points; load once.
    std::vector<LoadedRecord> loaded;
    loaded.reserve(records.size());
    for (const ManifestRecord& rec : records) loaded.push_back(load_record(rec, manifest_path));

    SweepResult result;
    for (int n : grid.n_values) {
        for (int k : grid.k_values) {
            for (double rho : grid.rho_values) {
                // The ratio depends only on (N, k, rho); compute it once and
                // reuse it across the L/strategy sub-grid.
                PipelineConfig ratio_config = options.base;
                ratio_config.n_frames = n;
                ratio_config.k = k;
                ratio_config.rho = rho;
                double ratio_sum = 0.0;
                for (std::size_t i = 0; i < loaded.size(); ++i) {
                    ratio_sum +=
                        compress_record(loaded[i], ratio_config, static_cast<std::int64_t>(i))
                            .ratio;
                }
                const double mean_ratio = ratio_sum / static_cast<double>(loaded.size());

                for (std::int64_t l : grid.l_values) {
                    for (Strategy strategy : grid.strategies) {
                        // Predictions for this grid point.
                        std::vector<QueryResult> qrs;
                        if (options.source == PredictionSource::files) {
                            const std::filesystem::path pred_path =
                                options.predictions_dir /
                                sweep_point_filename(n, k, rho, l, strategy);
                            if (!std::filesystem::exists(pred_path)) {
                                result.skipped.push_back(
                                    "missing predictions for N=" + std::to_string(n) +
                                    " k=" + std::to_string(k) + " rho=" + format_rho(rho) +
                                    " L=" + std::to_string(l) + " strategy=" +
                                    strategy_name(strategy) + " (" + pred_path.string() + ")");
                                continue;
                            }
                            std::map<std::string, std::vector<Moment>> by_qid;
                            for (PredictionRecord& p : read_predictions(pred_path)) {
                                by_qid[p.qid] = std::move(p.moments);
                            }
                            for (const ManifestRecord& rec : records) {
                                auto it = by_qid.find(rec.qid);
                                qrs.push_back({rec.qid,
                                               it == by_qid.end() ? std::vector<Moment>{}
                                                                  : it->second,
                                               rec.moments});
                            }
                        } else {
                            for (const ManifestRecord& rec : records) {
                                qrs.push_back({rec.qid,
                                               stub_predictions(rec.moments, options.source,
                                                                options.jitter_iou),
                                               rec.moments});
                            }
                        }

                        const MetricReport metrics =
                            evaluate(qrs, EvaluateOptions{{0.5, 0.7}, {0.5, 0.75}, false});
                        SweepRow row;
                        row.n = n;
                        row.k = k;
                        row.rho = rho;
                        row.l = l;
                        row.strategy = strategy;
                        row.r1_50 = metrics.r1[0].second;
                        row.r1_70 = metrics.r1[1].second;
                        row.map_50 = metrics.map[0].second;
                        row.map_75 = metrics.map[1].second;
                        row.miou = metrics.miou;
                        row.ratio = mean_ratio;
                        result.rows.push_back(row);
                    }
                }
            }
        }
    }
    return result;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "N,k,rho,L,strategy,R1@0.5,R1@0.7,mAP@0.5,mAP@0.75,mIoU,ratio\n";
    for (const SweepRow& row : rows) {
        char metrics[160];
        std::snprintf(metrics, sizeof metrics, "%.4f,%.4f,%.4f,%.4f,%.4f,%.4f", row.r1_50,
                      row.r1_70, row.map_50, row.map_75, row.miou, row.ratio);
        out << row.n << ',' << row.k << ',' << format_rho(row.rho) << ',' << row.l << ','
            << strategy_name(row.strategy) << ',' << metrics << '\n';
    }
    return out.str();
}

}  // namespace shotkit
