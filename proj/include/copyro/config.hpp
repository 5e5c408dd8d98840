#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "copyro/evolve.hpp"
#include "copyro/featurize.hpp"

namespace copyro {

// Defaults for every tunable knob, overridable from a `key = value` config
// file and then by command-line flags.
struct ToolConfig {
    int threads = 1;
    PipelineOptions pipeline;  // pca.threshold, pipeline.standardize
    int cv_k = 5;
    PsoConfig pso;
    MopsoConfig mopso;
    int tune_swarm = 20;
    int tune_iterations = 30;
    int tune_k = 5;
};

// Strict line-oriented parser: blank lines and '#' comments allowed,
// unknown keys are fatal (UnknownKey), bad values raise ConfigTypeError.
ToolConfig load_config(std::istream& in);
ToolConfig load_config_file(const std::string& path);

}  // namespace copyro
