#include "shotkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace shotkit {

namespace {

void require_tau(double tau) {
    if (!(tau > 0.0) || tau > 1.0 || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidTau, "tau must be in (0, 1]");
    }
}

void require_results(std::span<const QueryResult> results) {
    if (results.empty()) throw Error(ErrorCode::EmptyDataset, "no query results to evaluate");
}

// IoU of the top-ranked prediction against its best ground-truth match.
double top1_best_iou(const QueryResult& result) {
    if (result.predictions.empty() || result.ground_truth.empty()) return 0.0;
    const Moment& top = result.predictions.front();
    double best = 0.0;
    for (const Moment& gt : result.ground_truth) best = std::max(best, temporal_iou(top, gt));
    return best;
}

}  // namespace

double temporal_iou(const Moment& a, const Moment& b) {
    const double inter =
        std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
    const double uni =
        std::max(a.end_s, b.end_s) - std::min(a.start_s, b.start_s);
    if (!(uni > 0.0)) return 0.0;  // both zero-length: 0/0 := 0
    return inter / uni;
}

double recall_at_1(std::span<const QueryResult> results, double tau) {
    require_results(results);
    require_tau(tau);
    std::int64_t hits = 0;
    for (const QueryResult& r : results) {
        if (top1_best_iou(r) >= tau) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(results.size());
}

double mean_iou(std::span<const QueryResult> results) {
    require_results(results);
    double sum = 0.0;
    for (const QueryResult& r : results) sum += top1_best_iou(r);
    return sum / static_cast<double>(results.size());
}

double average_precision(const QueryResult& result, double tau) {
    require_tau(tau);
    const std::size_t n_gt = result.ground_truth.size();
    if (n_gt == 0) return 0.0;

    // Greedy matching in rank order: a prediction matches the unmatched
    // ground-truth moment of highest IoU (ties -> lower index) and is a true
    // positive iff that IoU reaches tau.  Only true positives consume the
    // matched moment.
    std::vector<char> taken(n_gt, 0);
    std::vector<char> is_tp(result.predictions.size(), 0);
    for (std::size_t p = 0; p < result.predictions.size(); ++p) {
        double best_iou = -1.0;
        std::size_t best_gt = n_gt;
        for (std::size_t g = 0; g < n_gt; ++g) {
            if (taken[g]) continue;
            const double iou = temporal_iou(result.predictions[p], result.ground_truth[g]);
            if (iou > best_iou) {
                best_iou = iou;
                best_gt = g;
            }
        }
        if (best_gt < n_gt && best_iou >= tau) {
            taken[best_gt] = 1;
            is_tp[p] = 1;
        }
    }

    // All-point interpolated area under the precision-recall curve: each true
    // positive contributes 1/n_gt of recall at the best precision achieved at
    // or beyond its rank.
    double ap = 0.0;
    double precision_max = 0.0;
    std::int64_t tp_total = 0;
    for (char f : is_tp) tp_total += f;
    std::int64_t tp_seen = tp_total;
    for (std::size_t p = result.predictions.size(); p-- > 0;) {
        const double precision =
            static_cast<double>(tp_seen) / static_cast<double>(p + 1);
        precision_max = std::max(precision_max, precision);
        if (is_tp[p]) {
            ap += precision_max;
            --tp_seen;
        }
    }
    return ap / static_cast<double>(n_gt);
}

MetricReport evaluate(std::span<const QueryResult> results, const EvaluateOptions& options) {
    require_results(results);
    MetricReport report;
    report.n_queries = static_cast<std::int64_t>(results.size());
    for (double tau : options.r1_taus) report.r1.emplace_back(tau, recall_at_1(results, tau));
    report.miou = mean_iou(results);

    auto map_at = [&results](double tau) {
        double sum = 0.0;
        for (const QueryResult& r : results) sum += average_precision(r, tau);
        return sum / static_cast<double>(results.size());
    };
    for (double tau : options.map_taus) report.map.emplace_back(tau, map_at(tau));
    if (options.map_avg_band) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < 10; ++i) {
            sum += map_at(0.5 + 0.05 * i);
            ++count;
        }
        report.map_avg = sum / count;
    }
    return report;
}

namespace {

std::string fmt_tau(double tau) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", tau);
    return buf;
}

std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string report_csv(const MetricReport& report) {
    std::ostringstream out;
    out << "metric,value\n";
    for (const auto& [tau, v] : report.r1) out << "R1@" << fmt_tau(tau) << ',' << fmt_value(v) << '\n';
    for (const auto& [tau, v] : report.map) out << "mAP@" << fmt_tau(tau) << ',' << fmt_value(v) << '\n';
    if (report.map_avg) out << "mAP@avg," << fmt_value(*report.map_avg) << '\n';
    out << "mIoU," << fmt_value(report.miou) << '\n';
    out << "n_queries," << report.n_queries << '\n';
    return out.str();
}

std::string report_markdown(const MetricReport& report) {
    std::ostringstream out;
    out << "| metric | value |\n|---|---|\n";
    for (const auto& [tau, v] : report.r1) {
        out << "| R1@" << fmt_tau(tau) << " | " << fmt_value(v) << " |\n";
    }
    for (const auto& [tau, v] : report.map) {
        out << "| mAP@" << fmt_tau(tau) << " | " << fmt_value(v) << " |\n";
    }
    if (report.map_avg) out << "| mAP@avg | " << fmt_value(*report.map_avg) << " |\n";
    out << "| mIoU | " << fmt_value(report.miou) << " |\n";
    out << "| queries | " << report.n_queries << " |\n";
    return out.str();
}

}  // namespace shotkit
