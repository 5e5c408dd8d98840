#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace copyro {

enum class RegressorKind { Gpr, Elm, Mlp, Svr, Gam };

const std::vector<RegressorKind>& all_regressor_kinds();
std::string to_string(RegressorKind kind);
RegressorKind regressor_kind_from_string(const std::string& name);

// Named hyperparameter values; integer-valued parameters are stored as
// doubles and rounded at fit time.
struct RegressorSpec {
    RegressorKind kind = RegressorKind::Gpr;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;

    double get(const std::string& name) const;
    double get_or(const std::string& name, double fallback) const;
};

struct ParamBound {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    bool log_scale = false;
    bool integer = false;
};

// Defaults and PSO search boxes per kind. `dim` is the input dimension
// (ARD lengthscale multipliers are only searched when dim <= 12).
RegressorSpec default_spec(RegressorKind kind, int dim);
std::vector<ParamBound> tuning_bounds(RegressorKind kind, int dim);

// Hard validity ranges per hyperparameter (wider than the search box); the
// fit dispatch enforces these.
std::vector<ParamBound> validity_bounds(RegressorKind kind, int dim);
void validate_spec(const RegressorSpec& spec, int dim);

// Type-erased trained model for the cross-validation and selection paths.
class TrainedRegressor {
  public:
    virtual ~TrainedRegressor() = default;
    virtual Eigen::VectorXd predict(const Eigen::MatrixXd& query) const = 0;
    virtual RegressorKind kind() const = 0;
};

std::unique_ptr<TrainedRegressor> fit_regressor(const RegressorSpec& spec,
                                                const Eigen::MatrixXd& x,
                                                const Eigen::VectorXd& y);

}  // namespace copyro
