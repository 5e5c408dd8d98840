#pragma once

#include <array>
#include <memory>
#include <string>

#include "copyro/elm.hpp"
#include "copyro/featurize.hpp"
#include "copyro/gam.hpp"
#include "copyro/gpr.hpp"
#include "copyro/mlp.hpp"
#include "copyro/regressor.hpp"
#include "copyro/svr.hpp"

#include "json.hpp"

namespace copyro {

inline constexpr int kBundleFormatVersion = 1;

// JSON documents carry a format tag and version; numeric arrays are stored
// row-major with exact round-trip decimal encoding.
nlohmann::json pipeline_to_json(const FeaturePipeline& pipeline);
FeaturePipeline pipeline_from_json(const nlohmann::json& j);

nlohmann::json gpr_to_json(const GprModel& model);
GprModel gpr_from_json(const nlohmann::json& j);

nlohmann::json elm_to_json(const ElmModel& model);
ElmModel elm_from_json(const nlohmann::json& j);

nlohmann::json mlp_to_json(const MlpModel& model);
MlpModel mlp_from_json(const nlohmann::json& j);

nlohmann::json svr_to_json(const SvrModel& model);
SvrModel svr_from_json(const nlohmann::json& j);

nlohmann::json gam_to_json(const GamModel& model);
GamModel gam_from_json(const nlohmann::json& j);

// Pipeline plus the three per-output models of one kind.
struct TrainedBundle {
    RegressorKind kind = RegressorKind::Gpr;
    FeaturePipeline pipeline;
    // only the slot matching `kind` is populated, one entry per output
    std::vector<GprModel> gpr;
    std::vector<ElmModel> elm;
    std::vector<MlpModel> mlp;
    std::vector<SvrModel> svr;
    std::vector<GamModel> gam;

    Eigen::Vector3d predict_yields(const CoPyrolysisRecord& rec) const;
};

TrainedBundle train_bundle(RegressorKind kind, const RegressorSpec& spec,
                           const std::vector<CoPyrolysisRecord>& records,
                           const PipelineOptions& options = {});
TrainedBundle train_bundle(RegressorKind kind, const std::array<RegressorSpec, 3>& specs,
                           const std::vector<CoPyrolysisRecord>& records,
                           const PipelineOptions& options = {});

nlohmann::json bundle_to_json(const TrainedBundle& bundle);
TrainedBundle bundle_from_json(const nlohmann::json& j);

void save_bundle(const TrainedBundle& bundle, const std::string& path);
TrainedBundle load_bundle(const std::string& path);

}  // namespace copyro
