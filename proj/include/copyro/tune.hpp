#pragma once

#include <cstdint>
#include <vector>

#include "copyro/evaluate.hpp"
#include "copyro/evolve.hpp"
#include "copyro/regressor.hpp"
#include "copyro/types.hpp"

namespace copyro {

struct TuneConfig {
    PsoConfig pso;        // search driver
    int cv_k = 5;         // folds of the tuning objective
    std::uint64_t cv_seed = 0;
    CvOptions cv_options;
};

struct TuneResult {
    RegressorSpec spec;       // best found, bounds respected
    double objective = 0.0;   // mean k-fold test RMSE over the three outputs
    std::size_t evaluations = 0;
};

// PSO over the kind's declared search box (log-scaled axes searched in
// log10). Failed fits inside the objective score 1e6 instead of aborting
// the swarm. Deterministic given config.pso.seed. `bounds_override`
// replaces the declared box (tests and power users). `output` selects the
// tuning target: 0/1/2 tunes oil/char/syngas alone (each output gets its
// own hyperparameters), -1 minimizes the mean over the three outputs.
TuneResult tune_hyperparameters(RegressorKind kind,
                                const std::vector<CoPyrolysisRecord>& records,
                                const TuneConfig& config,
                                const std::vector<ParamBound>* bounds_override = nullptr,
                                int output = -1);

struct TunedCvReport {
    CvReport report;
    // per-output specs selected inside each outer fold
    std::vector<std::array<RegressorSpec, 3>> fold_specs;
};

// Leakage-free tuned cross-validation: each outer fold runs the PSO search
// on its own training partition only (nested folds per `nested`), then
// fits with the selected specs and evaluates on the held-out fold. The
// nested search seeds derive from nested.pso.seed and the fold index.
TunedCvReport cross_validate_tuned(RegressorKind kind,
                                   const std::vector<CoPyrolysisRecord>& records, int k,
                                   std::uint64_t seed, const TuneConfig& nested,
                                   const CvOptions& options = {});

}  // namespace copyro
