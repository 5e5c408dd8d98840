#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "copyro/featurize.hpp"
#include "copyro/regressor.hpp"
#include "copyro/types.hpp"

namespace copyro {

struct FoldPlan {
    int k = 5;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> partitions;  // disjoint, union = 0..n-1

    std::uint64_t fingerprint() const;
};

// Seeded shuffle followed by a contiguous split; fold sizes differ by at
// most one.
FoldPlan make_folds(std::size_t n, int k, std::uint64_t seed);

struct MetricSet {
    double r2 = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
};

double r2(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
double mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);
MetricSet compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

struct FoldOutcome {
    // indexed [output] with outputs oil/char/syngas
    std::vector<MetricSet> train;
    std::vector<MetricSet> test;
    std::vector<MetricSet> train_raw;  // same metrics in raw yield percent
    std::vector<MetricSet> test_raw;
};

struct CvOptions {
    bool fit_on_all = false;  // compatibility: fit the pipeline once on every record
    PipelineOptions pipeline;
    int threads = 1;
};

struct CvReport {
    std::array<RegressorSpec, 3> specs;  // per output (oil, char, syngas)
    FoldPlan plan;

    RegressorKind kind() const { return specs[0].kind; }
    std::vector<FoldOutcome> folds;
    // means/sds over folds, indexed [output]
    std::vector<MetricSet> mean_train, mean_test, sd_train, sd_test;
    std::vector<MetricSet> mean_train_raw, mean_test_raw;

    double mean_test_r2_overall() const;    // averaged over the three outputs
    double mean_test_rmse_overall() const;
};

// Refits the feature pipeline on each training fold (default), trains one
// model per output, and reports metrics on min-max-normalized targets (raw
// percent alongside). Model errors inside a fold are rethrown with the fold
// identity attached. The array form carries one spec per output (all of one
// kind); the single-spec form shares it across the three outputs.
CvReport cross_validate(const std::array<RegressorSpec, 3>& specs,
                        const std::vector<CoPyrolysisRecord>& records, int k,
                        std::uint64_t seed, const CvOptions& options = {});
CvReport cross_validate(const RegressorSpec& spec, const std::vector<CoPyrolysisRecord>& records,
                        int k, std::uint64_t seed, const CvOptions& options = {});

// Evaluates one train/test split for the three outputs; metrics on
// normalized targets with raw-percent metrics alongside. Building block for
// cross_validate and the nested-tuning variant.
FoldOutcome evaluate_fold(const std::array<RegressorSpec, 3>& specs,
                          const std::vector<CoPyrolysisRecord>& train_records,
                          const std::vector<CoPyrolysisRecord>& test_records,
                          const FeaturePipeline& pipeline, std::size_t fold_index);

// Fills the mean/sd aggregates from report.folds (NaN R2 entries from
// degenerate single-point folds are skipped).
void finalize_cv_report(CvReport& report);

struct SelectionEntry {
    RegressorKind kind = RegressorKind::Gpr;
    double mean_test_r2 = 0.0;
    double mean_test_rmse = 0.0;
};

struct SelectionResult {
    RegressorKind best = RegressorKind::Gpr;
    std::vector<SelectionEntry> ranking;  // best first
};

// Ranks by mean test R2 over outputs; ties break on lower mean test RMSE,
// then lexicographic kind name. All reports must share one fold plan.
SelectionResult select_best(const std::vector<CvReport>& reports);

}  // namespace copyro
