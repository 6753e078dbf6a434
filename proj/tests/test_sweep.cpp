#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "shotkit/metrics.hpp"
#include "shotkit/sweep.hpp"
#include "shotkit/synthetic.hpp"

using namespace shotkit;

namespace {

SyntheticDataset small_dataset(const std::filesystem::path& dir, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_videos = 5;
    spec.n_frames = 24;
    spec.n_positions = 4;
    spec.feat_dim = 4;
    spec.shots_per_video = 2;
    spec.min_shot_frames = 4;
    spec.gt_windows = 1;
    spec.seed = seed;
    return generate_dataset(spec, dir);
}

}  // namespace

TEST_CASE("grid cardinality is the product of the axis sizes") {
    CHECK(SweepGrid{}.cardinality() == 1);
    SweepGrid grid;
    grid.n_values = {70, 80};
    grid.k_values = {16, 32, 48};
    grid.rho_values = {0.25, 0.5};
    grid.l_values = {150};
    grid.strategies = {Strategy::overall, Strategy::interleaved};
    CHECK(grid.cardinality() == 24);
}

TEST_CASE("grid point file names encode every axis") {
    CHECK(sweep_point_filename(80, 32, 0.25, 150, Strategy::overall) ==
          "80_32_0.25_150_overall.jsonl");
    CHECK(sweep_point_filename(100, 48, 0.5, 50, Strategy::interleaved) ==
          "100_48_0.5_50_interleaved.jsonl");
    CHECK(sweep_point_filename(70, 16, 1.0, 200, Strategy::dual_stream) ==
          "70_16_1_200_dual_stream.jsonl");
}

TEST_CASE("shrink_to_iou hits the target overlap exactly") {
    const Moment m{10.0, 20.0};
    const Moment half = shrink_to_iou(m, 0.5);
    CHECK(half.start_s == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(half.end_s == doctest::Approx(17.5).epsilon(1e-12));
    CHECK(temporal_iou(m, half) == doctest::Approx(0.5).epsilon(1e-12));

    Rng rng(211);
    for (int trial = 0; trial < 50; ++trial) {
        const double start = rng.uniform() * 50.0;
        const Moment gt{start, start + 0.5 + rng.uniform() * 20.0};
        const double target = 0.05 + 0.95 * rng.uniform();
        CHECK(temporal_iou(gt, shrink_to_iou(gt, target)) ==
              doctest::Approx(target).epsilon(1e-9));
    }

    // Identity at 1.0, degenerate moments pass through, bad targets throw.
    const Moment same = shrink_to_iou(m, 1.0);
    CHECK(same.start_s == 10.0);
    CHECK(same.end_s == 20.0);
    const Moment point = shrink_to_iou({5.0, 5.0}, 0.5);
    CHECK(point.start_s == 5.0);
    CHECK(point.end_s == 5.0);
    CHECK_THROWS_AS(shrink_to_iou(m, 0.0), Error);
    CHECK_THROWS_AS(shrink_to_iou(m, 1.5), Error);
}

TEST_CASE("echo predictions score perfectly at every grid point") {
    test::TempDir dir("sweep_echo");
    const SyntheticDataset dataset = small_dataset(dir.path(), 31);

    SweepGrid grid;
    grid.n_values = {12, 24};
    grid.k_values = {4};
    grid.rho_values = {0.5};
    grid.l_values = {150};
    grid.strategies = {Strategy::overall};
    SweepOptions options;
    options.source = PredictionSource::stub_echo;

    const SweepResult result = run_sweep(dataset.records, dataset.manifest_path, grid, options);
    CHECK(result.skipped.empty());
    REQUIRE(result.rows.size() == 2);
    for (const SweepRow& row : result.rows) {
        CHECK(row.r1_50 == doctest::Approx(1.0));
        CHECK(row.r1_70 == doctest::Approx(1.0));
        CHECK(row.map_50 == doctest::Approx(1.0));
        CHECK(row.map_75 == doctest::Approx(1.0));
        CHECK(row.miou == doctest::Approx(1.0));
        CHECK(row.ratio > 0.0);
        CHECK(row.ratio <= 1.0);
    }
    // Fewer frames compress harder.
    CHECK(result.rows[0].n == 12);
    CHECK(result.rows[1].n == 24);
    CHECK(result.rows[0].ratio >= result.rows[1].ratio);
}

TEST_CASE("jittered predictions land at the requested mean IoU") {
    test::TempDir dir("sweep_jitter");
    const SyntheticDataset dataset = small_dataset(dir.path(), 37);

    SweepGrid grid;
    grid.n_values = {24};
    grid.k_values = {4};
    grid.rho_values = {0.5};
    SweepOptions options;
    options.source = PredictionSource::stub_jitter;

    double previous_miou = 1.1;
    for (double target : {1.0, 0.9, 0.7, 0.55}) {
        options.jitter_iou = target;
        const SweepResult result =
            run_sweep(dataset.records, dataset.manifest_path, grid, options);
        REQUIRE(result.rows.size() == 1);
        // One ground-truth window per query, shrunk exactly to the target.
        CHECK(result.rows[0].miou == doctest::Approx(target).epsilon(1e-9));
        CHECK(result.rows[0].r1_50 == doctest::Approx(target >= 0.5 ? 1.0 : 0.0));
        // Rounding can land IoU a hair on either side of a threshold the
        // target sits exactly on, so only thresholds away from the target
        // have a determined value.
        if (target > 0.71 || target < 0.69) {
            CHECK(result.rows[0].r1_70 == doctest::Approx(target > 0.7 ? 1.0 : 0.0));
        }
        CHECK(result.rows[0].miou < previous_miou);
        previous_miou = result.rows[0].miou;
    }
}

TEST_CASE("files mode reads per-point prediction files and skips missing ones") {
    test::TempDir dir("sweep_files");
    test::TempDir preds("sweep_preds");
    const SyntheticDataset dataset = small_dataset(dir.path(), 41);

    SweepGrid grid;
    grid.n_values = {24};
    grid.k_values = {4};
    grid.rho_values = {0.5};
    grid.l_values = {150, 50};
    grid.strategies = {Strategy::overall};
    SweepOptions options;
    options.source = PredictionSource::files;
    options.predictions_dir = preds.path();

    // Provide predictions for L=150 only: echo ground truth for all but the
    // last qid, which stays unpredicted (counts as a miss, not an error).
    std::vector<PredictionRecord> echo;
    for (std::size_t i = 0; i + 1 < dataset.records.size(); ++i) {
        echo.push_back({dataset.records[i].qid, dataset.records[i].moments, {}});
    }
    write_predictions(echo,
                      preds.path() / sweep_point_filename(24, 4, 0.5, 150, Strategy::overall));

    const SweepResult result = run_sweep(dataset.records, dataset.manifest_path, grid, options);
    REQUIRE(result.rows.size() == 1);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].find("L=50") != std::string::npos);
    CHECK(result.rows[0].l == 150);
    // 4 of 5 queries hit, 1 has no predictions.
    CHECK(result.rows[0].r1_50 == doctest::Approx(0.8));
    CHECK(result.rows[0].miou == doctest::Approx(0.8));
}

TEST_CASE("sweep rejects empty inputs") {
    test::TempDir dir("sweep_empty");
    const SyntheticDataset dataset = small_dataset(dir.path(), 43);
    SweepGrid no_axis;
    no_axis.k_values.clear();
    CHECK_THROWS_AS(
        run_sweep(dataset.records, dataset.manifest_path, no_axis, SweepOptions{}),
        Error);
    CHECK_THROWS_AS(run_sweep({}, dataset.manifest_path, SweepGrid{}, SweepOptions{}), Error);
}

TEST_CASE("sweep csv has the fixed header and one line per row") {
    SweepRow row;
    row.n = 80;
    row.k = 32;
    row.rho = 0.25;
    row.l = 150;
    row.strategy = Strategy::overall;
    row.r1_50 = 0.5;
    row.r1_70 = 0.25;
    row.map_50 = 0.75;
    row.map_75 = 0.5;
    row.miou = 0.4567891;
    row.ratio = 0.55;
    const std::vector<SweepRow> rows{row, row};
    const std::string csv = sweep_csv(rows);
    CHECK(csv.find("N,k,rho,L,strategy,R1@0.5,R1@0.7,mAP@0.5,mAP@0.75,mIoU,ratio\n") == 0);
    CHECK(csv.find("80,32,0.25,150,overall,0.5000,0.2500,0.7500,0.5000,0.4568,0.5500\n") !=
          std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
