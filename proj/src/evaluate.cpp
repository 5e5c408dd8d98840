#include "copyro/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "copyro/errors.hpp"
#include "copyro/rng.hpp"

namespace copyro {

std::uint64_t FoldPlan::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h = (h ^ (v & 0xFF)) * 0x100000001B3ULL;
            v >>= 8;
        }
    };
    mix(static_cast<std::uint64_t>(k));
    mix(seed);
    for (const auto& part : partitions) {
        mix(part.size());
        for (std::size_t idx : part) mix(idx);
    }
    return h;
}

FoldPlan make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2 || static_cast<std::size_t>(k) > n)
        throw InvalidK("k must satisfy 2 <= k <= n (k=" + std::to_string(k) +
                       ", n=" + std::to_string(n) + ")");
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    Rng rng = Rng(seed).substream("folds");
    rng.shuffle(indices.begin(), indices.end());

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t at = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        plan.partitions.emplace_back(indices.begin() + static_cast<std::ptrdiff_t>(at),
                                     indices.begin() + static_cast<std::ptrdiff_t>(at + size));
        at += size;
    }
    return plan;
}

namespace {

void check_lengths(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    if (y.size() != y_hat.size() || y.size() == 0)
        throw LengthMismatch("metric inputs must have equal nonzero lengths");
}

}  // namespace

double r2(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    if (y.maxCoeff() == y.minCoeff())
        throw ConstantTarget("R2 is undefined for a constant target");
    const double mean = y.mean();
    const double ss_res = (y - y_hat).squaredNorm();
    const double ss_tot = (y.array() - mean).square().sum();
    return 1.0 - ss_res / ss_tot;
}

double mae(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    return (y - y_hat).cwiseAbs().mean();
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    check_lengths(y, y_hat);
    return std::sqrt((y - y_hat).squaredNorm() / static_cast<double>(y.size()));
}

MetricSet compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    MetricSet m;
    m.r2 = r2(y, y_hat);
    m.mae = mae(y, y_hat);
    m.rmse = rmse(y, y_hat);
    return m;
}

namespace {

// fold metrics tolerate degenerate partitions (single test point): R2 is
// reported as NaN there instead of failing the whole run
MetricSet fold_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
    MetricSet m;
    m.mae = mae(y, y_hat);
    m.rmse = rmse(y, y_hat);
    m.r2 = y.maxCoeff() == y.minCoeff() ? std::numeric_limits<double>::quiet_NaN()
                                        : r2(y, y_hat);
    return m;
}

}  // namespace

double CvReport::mean_test_r2_overall() const {
    double acc = 0.0;
    for (const auto& m : mean_test) acc += m.r2;
    return acc / static_cast<double>(mean_test.size());
}

double CvReport::mean_test_rmse_overall() const {
    double acc = 0.0;
    for (const auto& m : mean_test) acc += m.rmse;
    return acc / static_cast<double>(mean_test.size());
}

namespace {

std::vector<CoPyrolysisRecord> select_records(const std::vector<CoPyrolysisRecord>& records,
                                              const std::vector<std::size_t>& indices) {
    std::vector<CoPyrolysisRecord> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(records[i]);
    return out;
}

// runs tasks 0..count-1 on up to `threads` workers; results land by index so
// the outcome is thread-count-invariant
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < count;
                     i += static_cast<std::size_t>(workers))
                    task(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

CvReport cross_validate(const RegressorSpec& spec, const std::vector<CoPyrolysisRecord>& records,
                        int k, std::uint64_t seed, const CvOptions& options) {
    return cross_validate(std::array<RegressorSpec, 3>{spec, spec, spec}, records, k, seed,
                          options);
}

void finalize_cv_report(CvReport& report) {
    // means/sds skip NaN R2 entries from degenerate single-point folds
    auto aggregate = [&](auto pick, std::vector<MetricSet>& mean_out,
                         std::vector<MetricSet>* sd_out) {
        mean_out.assign(3, MetricSet{});
        const auto n = static_cast<double>(report.folds.size());
        for (int output = 0; output < 3; ++output) {
            double r2s = 0.0, maes = 0.0, rmses = 0.0, r2n = 0.0;
            for (const auto& fold : report.folds) {
                const MetricSet& m = pick(fold)[output];
                if (std::isfinite(m.r2)) {
                    r2s += m.r2;
                    r2n += 1.0;
                }
                maes += m.mae;
                rmses += m.rmse;
            }
            mean_out[output] = {r2n > 0 ? r2s / r2n : std::numeric_limits<double>::quiet_NaN(),
                                maes / n, rmses / n};
            if (sd_out) {
                double vr = 0.0, vm = 0.0, vs = 0.0;
                for (const auto& fold : report.folds) {
                    const MetricSet& m = pick(fold)[output];
                    if (std::isfinite(m.r2))
                        vr += (m.r2 - mean_out[output].r2) * (m.r2 - mean_out[output].r2);
                    vm += (m.mae - mean_out[output].mae) * (m.mae - mean_out[output].mae);
                    vs += (m.rmse - mean_out[output].rmse) * (m.rmse - mean_out[output].rmse);
                }
                (*sd_out)[output] = {r2n > 0 ? std::sqrt(vr / r2n)
                                             : std::numeric_limits<double>::quiet_NaN(),
                                     std::sqrt(vm / n), std::sqrt(vs / n)};
            }
        }
    };
    report.sd_train.assign(3, MetricSet{});
    report.sd_test.assign(3, MetricSet{});
    aggregate([](const FoldOutcome& f) -> const std::vector<MetricSet>& { return f.train; },
              report.mean_train, &report.sd_train);
    aggregate([](const FoldOutcome& f) -> const std::vector<MetricSet>& { return f.test; },
              report.mean_test, &report.sd_test);
    aggregate([](const FoldOutcome& f) -> const std::vector<MetricSet>& { return f.train_raw; },
              report.mean_train_raw, nullptr);
    aggregate([](const FoldOutcome& f) -> const std::vector<MetricSet>& { return f.test_raw; },
              report.mean_test_raw, nullptr);
}

FoldOutcome evaluate_fold(const std::array<RegressorSpec, 3>& specs,
                          const std::vector<CoPyrolysisRecord>& train_records,
                          const std::vector<CoPyrolysisRecord>& test_records,
                          const FeaturePipeline& pipeline, std::size_t fold_index) {
    const Eigen::MatrixXd train_x = transform_inputs(pipeline, train_records);
    const Eigen::MatrixXd test_x = transform_inputs(pipeline, test_records);
    const Eigen::MatrixXd train_y = transform_targets(pipeline, train_records);
    const Eigen::MatrixXd test_y = transform_targets(pipeline, test_records);

    FoldOutcome outcome;
    outcome.train.resize(3);
    outcome.test.resize(3);
    outcome.train_raw.resize(3);
    outcome.test_raw.resize(3);
    for (int output = 0; output < 3; ++output) {
        RegressorSpec fold_spec = specs[static_cast<std::size_t>(output)];
        fold_spec.seed =
            Rng(fold_spec.seed)
                .substream("cv-fold", fold_index * 3 + static_cast<std::size_t>(output))
                .next_u64();
        const auto model = fit_regressor(fold_spec, train_x, train_y.col(output));
        const Eigen::VectorXd train_pred = model->predict(train_x);
        const Eigen::VectorXd test_pred = model->predict(test_x);
        outcome.train[output] = fold_metrics(train_y.col(output), train_pred);
        outcome.test[output] = fold_metrics(test_y.col(output), test_pred);

        // raw percent: undo the target scaling on both sides
        const double lo = pipeline.target_scaler.lo[output];
        const double hi = pipeline.target_scaler.hi[output];
        const double range = hi > lo ? hi - lo : 1.0;
        auto denorm = [&](const Eigen::VectorXd& v) {
            return Eigen::VectorXd((v.array() * range + lo).matrix());
        };
        outcome.train_raw[output] = fold_metrics(denorm(train_y.col(output)), denorm(train_pred));
        outcome.test_raw[output] = fold_metrics(denorm(test_y.col(output)), denorm(test_pred));
    }
    return outcome;
}

CvReport cross_validate(const std::array<RegressorSpec, 3>& specs,
                        const std::vector<CoPyrolysisRecord>& records, int k,
                        std::uint64_t seed, const CvOptions& options) {
    for (int o = 1; o < 3; ++o)
        if (specs[o].kind != specs[0].kind)
            throw FoldPlanMismatch("per-output specs must share one model kind");
    for (const auto& rec : records)
        if (!rec.yields)
            throw MissingYields("record '" + rec.id + "' lacks yields; cross-validation needs "
                                "fully labeled data");

    CvReport report;
    report.specs = specs;
    report.plan = make_folds(records.size(), k, seed);
    report.folds.resize(static_cast<std::size_t>(k));

    FeaturePipeline global_pipeline;
    if (options.fit_on_all) global_pipeline = fit_pipeline(records, options.pipeline);

    auto run_fold = [&](std::size_t f) {
        try {
            std::vector<std::size_t> train_idx;
            for (std::size_t g = 0; g < report.plan.partitions.size(); ++g)
                if (g != f)
                    train_idx.insert(train_idx.end(), report.plan.partitions[g].begin(),
                                     report.plan.partitions[g].end());
            const auto train_records = select_records(records, train_idx);
            const auto test_records = select_records(records, report.plan.partitions[f]);
            const FeaturePipeline pipeline =
                options.fit_on_all ? global_pipeline : fit_pipeline(train_records, options.pipeline);
            report.folds[f] = evaluate_fold(specs, train_records, test_records, pipeline, f);
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f + 1) + ": " + e.what());
        }
    };
    parallel_for(report.folds.size(), options.threads, run_fold);

    finalize_cv_report(report);
    return report;
}

SelectionResult select_best(const std::vector<CvReport>& reports) {
    if (reports.size() < 2)
        throw FoldPlanMismatch("model selection needs at least two reports");
    const std::uint64_t fp = reports.front().plan.fingerprint();
    for (const auto& r : reports)
        if (r.plan.fingerprint() != fp)
            throw FoldPlanMismatch("reports were produced with different fold plans");

    SelectionResult result;
    for (const auto& r : reports)
        result.ranking.push_back(
            {r.kind(), r.mean_test_r2_overall(), r.mean_test_rmse_overall()});
    std::sort(result.ranking.begin(), result.ranking.end(),
              [](const SelectionEntry& a, const SelectionEntry& b) {
                  if (a.mean_test_r2 != b.mean_test_r2) return a.mean_test_r2 > b.mean_test_r2;
                  if (a.mean_test_rmse != b.mean_test_rmse)
                      return a.mean_test_rmse < b.mean_test_rmse;
                  return to_string(a.kind) < to_string(b.kind);
              });
    result.best = result.ranking.front().kind;
    return result;
}

}  // namespace copyro
