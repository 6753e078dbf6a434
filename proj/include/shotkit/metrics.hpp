#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shotkit/moments.hpp"

namespace shotkit {

// One query's ranked predictions alongside its ground truth.
struct QueryResult {
    std::string qid;
    std::vector<Moment> predictions;  // rank order, best first
    std::vector<Moment> ground_truth;
};

// Intersection-over-union of two segments; 0/0 (e.g. two identical
// zero-length moments) is defined as 0.
double temporal_iou(const Moment& a, const Moment& b);

// Fraction of queries whose top-1 prediction reaches IoU >= tau against the
// best-matching ground-truth moment.  Queries with no predictions count as
// misses.  Requires a non-empty result set and tau in (0, 1].
double recall_at_1(std::span<const QueryResult> results, double tau);

// Mean over queries of the top-1 prediction's best IoU (0 when a query has
// no predictions).
double mean_iou(std::span<const QueryResult> results);

// Detection-style average precision for one query at IoU threshold tau:
// predictions in rank order greedily match the unmatched ground-truth moment
// of highest IoU (ties -> lower index); a prediction is a true positive iff
// that IoU >= tau (only true positives consume the matched moment).  AP is
// the all-point interpolated area under the precision-recall curve, with
// recall denominator = number of ground-truth moments.  No ground truth
// yields AP 0 by convention.
double average_precision(const QueryResult& result, double tau);

struct EvaluateOptions {
    std::vector<double> r1_taus = {0.5, 0.7};
    std::vector<double> map_taus = {0.5, 0.75};
    // Also average mAP over taus 0.50:0.05:0.95.
    bool map_avg_band = false;
};

struct MetricReport {
    std::vector<std::pair<double, double>> r1;   // (tau, value)
    std::vector<std::pair<double, double>> map;  // (tau, value)
    double miou = 0.0;
    std::optional<double> map_avg;
    std::int64_t n_queries = 0;
};

// Full metric suite over a result set.  Rejects empty result sets.
MetricReport evaluate(std::span<const QueryResult> results, const EvaluateOptions& options = {});

// "metric,value" rows, deterministic order.
std::string report_csv(const MetricReport& report);

// Human-readable table.
std::string report_markdown(const MetricReport& report);

}  // namespace shotkit
