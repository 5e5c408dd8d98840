#include "copyro/regressor.hpp"

#include <algorithm>
#include <cmath>

#include "copyro/elm.hpp"
#include "copyro/errors.hpp"
#include "copyro/gam.hpp"
#include "copyro/gpr.hpp"
#include "copyro/mlp.hpp"
#include "copyro/svr.hpp"

namespace copyro {

const std::vector<RegressorKind>& all_regressor_kinds() {
    static const std::vector<RegressorKind> kinds = {RegressorKind::Gpr, RegressorKind::Elm,
                                                     RegressorKind::Mlp, RegressorKind::Svr,
                                                     RegressorKind::Gam};
    return kinds;
}

std::string to_string(RegressorKind kind) {
    switch (kind) {
        case RegressorKind::Gpr: return "gpr";
        case RegressorKind::Elm: return "elm";
        case RegressorKind::Mlp: return "mlp";
        case RegressorKind::Svr: return "svr";
        case RegressorKind::Gam: return "gam";
    }
    return "unknown";
}

RegressorKind regressor_kind_from_string(const std::string& name) {
    for (RegressorKind kind : all_regressor_kinds())
        if (to_string(kind) == name) return kind;
    throw ConfigTypeError("unknown model kind '" + name + "' (gpr|elm|mlp|svr|gam)");
}

double RegressorSpec::get(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end())
        throw ConfigTypeError("missing hyperparameter '" + name + "' for " + to_string(kind));
    return it->second;
}

double RegressorSpec::get_or(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

RegressorSpec default_spec(RegressorKind kind, int dim) {
    RegressorSpec spec;
    spec.kind = kind;
    switch (kind) {
        case RegressorKind::Gpr: {
            spec.params["alpha"] = 1.174;
            spec.params["sigma_f"] = 0.160;
            spec.params["sigma_n"] = 0.05;
            spec.params["ell"] = 1.0;
            spec.params["linear_basis"] = 1.0;
            // ARD multipliers for the leading components, capped at 12 to
            // keep the search tractable; later dimensions share `ell`
            for (int i = 0; i < std::min(dim, 12); ++i)
                spec.params["ell_mult_" + std::to_string(i)] = 1.0;
            break;
        }
        case RegressorKind::Elm:
            spec.params["hidden_count"] = 64;
            spec.params["ridge_lambda"] = 1e-4;
            break;
        case RegressorKind::Mlp:
            spec.params["hidden"] = 16;
            spec.params["step_size"] = 0.05;
            spec.params["epochs"] = 200;
            spec.params["batch_size"] = 16;
            break;
        case RegressorKind::Svr:
            spec.params["box_c"] = 10.0;
            spec.params["epsilon"] = 0.01;
            spec.params["gamma"] = 1.0;
            break;
        case RegressorKind::Gam:
            spec.params["rounds"] = 300;
            spec.params["learning_rate"] = 0.1;
            break;
    }
    return spec;
}

std::vector<ParamBound> tuning_bounds(RegressorKind kind, int dim) {
    std::vector<ParamBound> bounds;
    switch (kind) {
        case RegressorKind::Gpr: {
            bounds.push_back({"alpha", 0.05, 50.0, true, false});
            bounds.push_back({"sigma_f", 1e-2, 10.0, true, false});
            bounds.push_back({"sigma_n", 1e-6, 1.0, true, false});
            bounds.push_back({"ell", 0.05, 20.0, true, false});
            for (int i = 0; i < std::min(dim, 12); ++i)
                bounds.push_back({"ell_mult_" + std::to_string(i), 0.02, 50.0, true, false});
            break;
        }
        case RegressorKind::Elm:
            bounds.push_back({"hidden_count", 8, 200, false, true});
            bounds.push_back({"ridge_lambda", 1e-8, 1.0, true, false});
            break;
        case RegressorKind::Mlp:
            bounds.push_back({"hidden", 4, 48, false, true});
            bounds.push_back({"step_size", 1e-3, 0.3, true, false});
            break;
        case RegressorKind::Svr:
            bounds.push_back({"box_c", 0.1, 1000.0, true, false});
            bounds.push_back({"epsilon", 1e-3, 0.2, true, false});
            bounds.push_back({"gamma", 0.01, 100.0, true, false});
            break;
        case RegressorKind::Gam:
            bounds.push_back({"rounds", 50, 1000, false, true});
            bounds.push_back({"learning_rate", 0.01, 0.5, true, false});
            break;
    }
    return bounds;
}

std::vector<ParamBound> validity_bounds(RegressorKind kind, int dim) {
    std::vector<ParamBound> bounds;
    switch (kind) {
        case RegressorKind::Gpr: {
            bounds.push_back({"alpha", 1e-6, 1e6, true, false});
            bounds.push_back({"sigma_f", 1e-9, 1e6, true, false});
            bounds.push_back({"sigma_n", 0.0, 1e6, false, false});
            bounds.push_back({"ell", 1e-9, 1e9, true, false});
            bounds.push_back({"linear_basis", 0.0, 1.0, false, true});
            for (int i = 0; i < dim; ++i)
                bounds.push_back({"ell_mult_" + std::to_string(i), 1e-9, 1e9, true, false});
            break;
        }
        case RegressorKind::Elm:
            bounds.push_back({"hidden_count", 1, 1e6, false, true});
            bounds.push_back({"ridge_lambda", 0.0, 1e15, true, false});
            break;
        case RegressorKind::Mlp:
            bounds.push_back({"hidden", 1, 1e5, false, true});
            bounds.push_back({"step_size", 1e-9, 10.0, true, false});
            bounds.push_back({"epochs", 0, 1e7, false, true});
            bounds.push_back({"batch_size", 1, 1e7, false, true});
            break;
        case RegressorKind::Svr:
            bounds.push_back({"box_c", 1e-12, 1e9, true, false});
            bounds.push_back({"epsilon", 0.0, 1e6, false, false});
            bounds.push_back({"gamma", 1e-9, 1e9, true, false});
            break;
        case RegressorKind::Gam:
            bounds.push_back({"rounds", 0, 1e7, false, true});
            bounds.push_back({"learning_rate", 1e-9, 1.0, true, false});
            break;
    }
    return bounds;
}

void validate_spec(const RegressorSpec& spec, int dim) {
    for (const auto& bound : validity_bounds(spec.kind, dim)) {
        auto it = spec.params.find(bound.name);
        if (it == spec.params.end()) continue;  // defaults fill at fit time
        if (it->second < bound.lo - 1e-12 || it->second > bound.hi + 1e-12)
            throw RangeViolation("hyperparameter '" + bound.name + "' = " +
                                 std::to_string(it->second) + " outside [" +
                                 std::to_string(bound.lo) + ", " + std::to_string(bound.hi) +
                                 "]");
    }
}

namespace {

GprHyper gpr_hyper_from_spec(const RegressorSpec& spec, int dim) {
    GprHyper hp;
    hp.alpha = spec.get_or("alpha", 1.174);
    hp.sigma_f = spec.get_or("sigma_f", 0.160);
    hp.sigma_n = spec.get_or("sigma_n", 0.05);
    hp.linear_basis = spec.get_or("linear_basis", 1.0) != 0.0;
    const double ell = spec.get_or("ell", 1.0);
    hp.lengthscales.resize(dim);
    for (int i = 0; i < dim; ++i)
        hp.lengthscales[i] = ell * spec.get_or("ell_mult_" + std::to_string(i), 1.0);
    return hp;
}

struct GprTrained : TrainedRegressor {
    GprModel model;
    Eigen::VectorXd predict(const Eigen::MatrixXd& q) const override {
        return gpr_predict_mean(model, q);
    }
    RegressorKind kind() const override { return RegressorKind::Gpr; }
};

struct ElmTrained : TrainedRegressor {
    ElmModel model;
    Eigen::VectorXd predict(const Eigen::MatrixXd& q) const override {
        return elm_predict(model, q);
    }
    RegressorKind kind() const override { return RegressorKind::Elm; }
};

struct MlpTrained : TrainedRegressor {
    MlpModel model;
    Eigen::VectorXd predict(const Eigen::MatrixXd& q) const override {
        return mlp_predict(model, q);
    }
    RegressorKind kind() const override { return RegressorKind::Mlp; }
};

struct SvrTrained : TrainedRegressor {
    SvrModel model;
    Eigen::VectorXd predict(const Eigen::MatrixXd& q) const override {
        return svr_predict(model, q);
    }
    RegressorKind kind() const override { return RegressorKind::Svr; }
};

struct GamTrained : TrainedRegressor {
    GamModel model;
    Eigen::VectorXd predict(const Eigen::MatrixXd& q) const override {
        return gam_predict(model, q);
    }
    RegressorKind kind() const override { return RegressorKind::Gam; }
};

}  // namespace

std::unique_ptr<TrainedRegressor> fit_regressor(const RegressorSpec& spec,
                                                const Eigen::MatrixXd& x,
                                                const Eigen::VectorXd& y) {
    const int dim = static_cast<int>(x.cols());
    validate_spec(spec, dim);
    switch (spec.kind) {
        case RegressorKind::Gpr: {
            auto t = std::make_unique<GprTrained>();
            t->model = gpr_fit(x, y, gpr_hyper_from_spec(spec, dim));
            return t;
        }
        case RegressorKind::Elm: {
            ElmSpec es;
            es.hidden_count = static_cast<int>(std::lround(spec.get_or("hidden_count", 64)));
            es.ridge_lambda = spec.get_or("ridge_lambda", 1e-4);
            es.seed = spec.seed;
            auto t = std::make_unique<ElmTrained>();
            t->model = elm_fit(x, y, es);
            return t;
        }
        case RegressorKind::Mlp: {
            MlpSpec ms;
            ms.hidden_sizes = {static_cast<int>(std::lround(spec.get_or("hidden", 16)))};
            ms.step_size = spec.get_or("step_size", 0.05);
            ms.epochs = static_cast<int>(std::lround(spec.get_or("epochs", 200)));
            ms.batch_size = static_cast<int>(std::lround(spec.get_or("batch_size", 16)));
            ms.seed = spec.seed;
            auto t = std::make_unique<MlpTrained>();
            t->model = mlp_fit(x, y, ms);
            return t;
        }
        case RegressorKind::Svr: {
            SvrSpec ss;
            ss.box_c = spec.get_or("box_c", 10.0);
            ss.epsilon = spec.get_or("epsilon", 0.01);
            ss.gamma = spec.get_or("gamma", 1.0);
            auto t = std::make_unique<SvrTrained>();
            t->model = svr_fit(x, y, ss);
            return t;
        }
        case RegressorKind::Gam: {
            GamSpec gs;
            gs.rounds = static_cast<int>(std::lround(spec.get_or("rounds", 300)));
            gs.learning_rate = spec.get_or("learning_rate", 0.1);
            auto t = std::make_unique<GamTrained>();
            t->model = gam_fit(x, y, gs);
            return t;
        }
    }
    throw ConfigTypeError("unhandled regressor kind");
}

}  // namespace copyro
