#include "copyro/tune.hpp"

#include <algorithm>
#include <cmath>

#include "copyro/errors.hpp"
#include "copyro/rng.hpp"

namespace copyro {

namespace {

constexpr double kFailedFitPenalty = 1e6;

struct FoldData {
    Eigen::MatrixXd train_x, test_x;
    Eigen::MatrixXd train_y, test_y;  // normalized targets, 3 columns
};

RegressorSpec spec_from_position(RegressorKind kind, const std::vector<ParamBound>& bounds,
                                 const Eigen::VectorXd& position, std::uint64_t seed) {
    RegressorSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        double v = position[static_cast<Eigen::Index>(i)];
        if (bounds[i].log_scale) v = std::pow(10.0, v);
        if (bounds[i].integer) v = std::round(v);
        v = std::clamp(v, bounds[i].lo, bounds[i].hi);
        spec.params[bounds[i].name] = v;
    }
    return spec;
}

}  // namespace

TuneResult tune_hyperparameters(RegressorKind kind,
                                const std::vector<CoPyrolysisRecord>& records,
                                const TuneConfig& config,
                                const std::vector<ParamBound>* bounds_override, int output) {
    for (const auto& rec : records)
        if (!rec.yields)
            throw MissingYields("record '" + rec.id + "' lacks yields; tuning needs labeled data");
    if (output < -1 || output > 2)
        throw DimensionMismatch("tuning output must be -1 (mean) or 0/1/2");

    // fold datasets do not depend on the candidate spec; transform once
    const FoldPlan plan = make_folds(records.size(), config.cv_k, config.cv_seed);
    FeaturePipeline global_pipeline;
    if (config.cv_options.fit_on_all)
        global_pipeline = fit_pipeline(records, config.cv_options.pipeline);

    std::vector<FoldData> folds;
    int score_dim = 0;
    for (std::size_t f = 0; f < plan.partitions.size(); ++f) {
        std::vector<CoPyrolysisRecord> train_records, test_records;
        for (std::size_t g = 0; g < plan.partitions.size(); ++g)
            for (std::size_t idx : plan.partitions[g])
                (g == f ? test_records : train_records).push_back(records[idx]);
        const FeaturePipeline pipeline =
            config.cv_options.fit_on_all ? global_pipeline
                                         : fit_pipeline(train_records, config.cv_options.pipeline);
        FoldData fd;
        fd.train_x = transform_inputs(pipeline, train_records);
        fd.test_x = transform_inputs(pipeline, test_records);
        fd.train_y = transform_targets(pipeline, train_records);
        fd.test_y = transform_targets(pipeline, test_records);
        score_dim = std::max(score_dim, static_cast<int>(fd.train_x.cols()));
        folds.push_back(std::move(fd));
    }

    const std::vector<ParamBound> param_bounds =
        bounds_override ? *bounds_override : tuning_bounds(kind, score_dim);
    Bounds search;
    search.lo.resize(static_cast<Eigen::Index>(param_bounds.size()));
    search.hi.resize(static_cast<Eigen::Index>(param_bounds.size()));
    for (std::size_t i = 0; i < param_bounds.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        if (param_bounds[i].log_scale) {
            search.lo[j] = std::log10(param_bounds[i].lo);
            search.hi[j] = std::log10(param_bounds[i].hi);
        } else {
            search.lo[j] = param_bounds[i].lo;
            search.hi[j] = param_bounds[i].hi;
        }
    }

    std::size_t evaluations = 0;
    auto objective = [&](const Eigen::VectorXd& position) {
        ++evaluations;
        const RegressorSpec spec = spec_from_position(kind, param_bounds, position, 0);
        double rmse_sum = 0.0;
        std::size_t count = 0;
        try {
            for (std::size_t f = 0; f < folds.size(); ++f) {
                for (int o = 0; o < 3; ++o) {
                    if (output >= 0 && o != output) continue;
                    RegressorSpec fold_spec = spec;
                    fold_spec.seed = Rng(spec.seed)
                                         .substream("cv-fold", f * 3 + static_cast<std::size_t>(o))
                                         .next_u64();
                    const auto model =
                        fit_regressor(fold_spec, folds[f].train_x, folds[f].train_y.col(o));
                    rmse_sum += rmse(folds[f].test_y.col(o), model->predict(folds[f].test_x));
                    ++count;
                }
            }
        } catch (const Error&) {
            return kFailedFitPenalty;  // keep the swarm total
        }
        const double value = rmse_sum / static_cast<double>(count);
        return std::isfinite(value) ? value : kFailedFitPenalty;
    };

    const PsoResult pso = pso_minimize(objective, search, config.pso);

    TuneResult result;
    result.spec = spec_from_position(kind, param_bounds, pso.best_position, 0);
    result.objective = pso.best_value;
    result.evaluations = evaluations;
    return result;
}

TunedCvReport cross_validate_tuned(RegressorKind kind,
                                   const std::vector<CoPyrolysisRecord>& records, int k,
                                   std::uint64_t seed, const TuneConfig& nested,
                                   const CvOptions& options) {
    for (const auto& rec : records)
        if (!rec.yields)
            throw MissingYields("record '" + rec.id + "' lacks yields");

    TunedCvReport tuned;
    tuned.report.plan = make_folds(records.size(), k, seed);
    tuned.report.folds.resize(static_cast<std::size_t>(k));
    tuned.fold_specs.resize(static_cast<std::size_t>(k));

    FeaturePipeline global_pipeline;
    if (options.fit_on_all) global_pipeline = fit_pipeline(records, options.pipeline);

    for (std::size_t f = 0; f < tuned.report.plan.partitions.size(); ++f) {
        std::vector<CoPyrolysisRecord> train_records, test_records;
        for (std::size_t g = 0; g < tuned.report.plan.partitions.size(); ++g)
            for (std::size_t idx : tuned.report.plan.partitions[g])
                (g == f ? test_records : train_records).push_back(records[idx]);

        std::array<RegressorSpec, 3>& specs = tuned.fold_specs[f];
        for (int output = 0; output < 3; ++output) {
            TuneConfig fold_nested = nested;
            fold_nested.pso.seed = Rng(nested.pso.seed)
                                       .substream("nested-tune",
                                                  f * 3 + static_cast<std::size_t>(output))
                                       .next_u64();
            specs[static_cast<std::size_t>(output)] =
                tune_hyperparameters(kind, train_records, fold_nested, nullptr, output).spec;
        }
        const FeaturePipeline pipeline =
            options.fit_on_all ? global_pipeline : fit_pipeline(train_records, options.pipeline);
        try {
            tuned.report.folds[f] = evaluate_fold(specs, train_records, test_records, pipeline, f);
        } catch (const Error& e) {
            throw Error("fold " + std::to_string(f + 1) + ": " + e.what());
        }
    }
    tuned.report.specs = tuned.fold_specs.front();
    finalize_cv_report(tuned.report);
    return tuned;
}

}  // namespace copyro
