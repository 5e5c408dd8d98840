#include <algorithm>
#include <cmath>

#include "copyro/dataset.hpp"
#include "copyro/evaluate.hpp"
#include "copyro/rng.hpp"
#include "copyro/tune.hpp"
#include "doctest.h"

using namespace copyro;

TEST_CASE("tuning with bounds collapsed to a point returns that point") {
    const auto records = synthesize_dataset(30, 15, 0.05);
    std::vector<ParamBound> collapsed = {{"hidden_count", 24, 24, false, true},
                                         {"ridge_lambda", 1e-3, 1e-3, true, false}};
    TuneConfig config;
    config.pso.swarm_size = 4;
    config.pso.iterations = 2;
    config.cv_k = 3;
    const TuneResult result =
        tune_hyperparameters(RegressorKind::Elm, records, config, &collapsed);
    CHECK(result.spec.get("hidden_count") == 24);
    CHECK(result.spec.get("ridge_lambda") == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("tuned objective beats an equal-budget random search for two seeds") {
    const auto records = synthesize_dataset(40, 16, 0.05);
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        TuneConfig config;
        config.pso.swarm_size = 10;
        config.pso.iterations = 10;
        config.pso.seed = seed;
        config.cv_k = 3;
        config.cv_seed = 9;
        const TuneResult tuned = tune_hyperparameters(RegressorKind::Elm, records, config);

        Rng rng = Rng(seed).substream("tune-baseline");
        const auto bounds = tuning_bounds(RegressorKind::Elm, 0);
        double best_random = 1e300;
        for (std::size_t e = 0; e < tuned.evaluations; ++e) {
            RegressorSpec spec;
            spec.kind = RegressorKind::Elm;
            for (const auto& b : bounds) {
                double v = b.log_scale
                               ? std::pow(10.0, rng.uniform(std::log10(b.lo), std::log10(b.hi)))
                               : rng.uniform(b.lo, b.hi);
                if (b.integer) v = std::round(v);
                spec.params[b.name] = v;
            }
            const CvReport report = cross_validate(spec, records, 3, 9);
            best_random = std::min(best_random, report.mean_test_rmse_overall());
        }
        CHECK(tuned.objective <= best_random + 1e-12);
    }
}

TEST_CASE("tuning is deterministic per seed") {
    const auto records = synthesize_dataset(24, 17, 0.05);
    TuneConfig config;
    config.pso.swarm_size = 5;
    config.pso.iterations = 3;
    config.pso.seed = 4;
    config.cv_k = 3;
    const TuneResult a = tune_hyperparameters(RegressorKind::Gam, records, config);
    const TuneResult b = tune_hyperparameters(RegressorKind::Gam, records, config);
    CHECK(a.objective == b.objective);
    CHECK(a.spec.params == b.spec.params);
}

TEST_CASE("tuned result agrees with cross_validate on the same spec") {
    const auto records = synthesize_dataset(30, 18, 0.05);
    TuneConfig config;
    config.pso.swarm_size = 5;
    config.pso.iterations = 3;
    config.cv_k = 3;
    config.cv_seed = 21;
    const TuneResult tuned = tune_hyperparameters(RegressorKind::Elm, records, config);
    const CvReport check = cross_validate(tuned.spec, records, 3, 21);
    CHECK(check.mean_test_rmse_overall() == doctest::Approx(tuned.objective).epsilon(1e-9));
}

TEST_CASE("nested-tuning cross-validation is leakage-free and reproducible") {
    const auto records = synthesize_dataset(36, 19, 0.05);
    TuneConfig nested;
    nested.pso.swarm_size = 4;
    nested.pso.iterations = 2;
    nested.pso.seed = 8;
    nested.cv_k = 3;
    nested.cv_seed = 4;
    const TunedCvReport a = cross_validate_tuned(RegressorKind::Elm, records, 3, 6, nested);
    REQUIRE(a.report.folds.size() == 3);
    REQUIRE(a.fold_specs.size() == 3);
    for (const auto& specs : a.fold_specs)
        for (const auto& spec : specs) {
            CHECK(spec.get("hidden_count") >= 8);
            CHECK(spec.get("hidden_count") <= 200);
        }
    for (int o = 0; o < 3; ++o) {
        CHECK(std::isfinite(a.report.mean_test[o].rmse));
        CHECK(a.report.mean_test[o].rmse >= 0.0);
    }
    const TunedCvReport b = cross_validate_tuned(RegressorKind::Elm, records, 3, 6, nested);
    for (std::size_t f = 0; f < 3; ++f)
        CHECK(a.report.folds[f].test[0].rmse == b.report.folds[f].test[0].rmse);
}
