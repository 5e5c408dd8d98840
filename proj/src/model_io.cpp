#include "copyro/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "copyro/errors.hpp"
#include "copyro/rng.hpp"

namespace copyro {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
    j["data"] = data;
    return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ConfigTypeError("matrix payload length mismatch");
    Eigen::MatrixXd m(rows, cols);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[at++];
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
    const auto data = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(data.data(),
                                             static_cast<Eigen::Index>(data.size()));
}

std::string fingerprint_to_hex(std::uint64_t fp) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

std::uint64_t fingerprint_from_hex(const std::string& hex) {
    return std::stoull(hex, nullptr, 16);
}

void check_format(const json& j, const std::string& tag) {
    if (j.value("format", "") != tag)
        throw ConfigTypeError("document is not a '" + tag + "' JSON file");
    if (j.value("version", 0) != kBundleFormatVersion)
        throw ConfigTypeError("unsupported " + tag + " version");
}

}  // namespace

json pipeline_to_json(const FeaturePipeline& p) {
    json j;
    j["format"] = "copyro-pipeline";
    j["version"] = kBundleFormatVersion;
    j["options"] = {{"variance_threshold", p.options.variance_threshold},
                    {"standardize", p.options.standardize}};
    j["standardizer"] = {{"mean", vector_to_json(p.standardizer.mean)},
                         {"sd", vector_to_json(p.standardizer.sd)}};
    j["pca"] = {{"column_mean", vector_to_json(p.pca.column_mean)},
                {"loadings", matrix_to_json(p.pca.loadings)},
                {"explained_variance_ratio", vector_to_json(p.pca.explained_variance_ratio)},
                {"eigenvalues", vector_to_json(p.pca.eigenvalues)}};
    j["score_scaler"] = {{"lo", vector_to_json(p.score_scaler.lo)},
                         {"hi", vector_to_json(p.score_scaler.hi)}};
    j["target_scaler"] = {{"lo", vector_to_json(p.target_scaler.lo)},
                          {"hi", vector_to_json(p.target_scaler.hi)}};
    j["raw_input_lo"] = vector_to_json(p.raw_input_lo);
    j["raw_input_hi"] = vector_to_json(p.raw_input_hi);
    return j;
}

FeaturePipeline pipeline_from_json(const json& j) {
    check_format(j, "copyro-pipeline");
    FeaturePipeline p;
    p.options.variance_threshold = j.at("options").at("variance_threshold").get<double>();
    p.options.standardize = j.at("options").at("standardize").get<bool>();
    p.standardizer.mean = vector_from_json(j.at("standardizer").at("mean"));
    p.standardizer.sd = vector_from_json(j.at("standardizer").at("sd"));
    p.pca.column_mean = vector_from_json(j.at("pca").at("column_mean"));
    p.pca.loadings = matrix_from_json(j.at("pca").at("loadings"));
    p.pca.explained_variance_ratio =
        vector_from_json(j.at("pca").at("explained_variance_ratio"));
    p.pca.eigenvalues = vector_from_json(j.at("pca").at("eigenvalues"));
    p.score_scaler.lo = vector_from_json(j.at("score_scaler").at("lo"));
    p.score_scaler.hi = vector_from_json(j.at("score_scaler").at("hi"));
    p.target_scaler.lo = vector_from_json(j.at("target_scaler").at("lo"));
    p.target_scaler.hi = vector_from_json(j.at("target_scaler").at("hi"));
    p.raw_input_lo = vector_from_json(j.at("raw_input_lo"));
    p.raw_input_hi = vector_from_json(j.at("raw_input_hi"));
    return p;
}

json gpr_to_json(const GprModel& m) {
    json j;
    j["kind"] = "gpr";
    j["hyperparameters"] = {{"alpha", m.hp.alpha},
                            {"sigma_f", m.hp.sigma_f},
                            {"sigma_n", m.hp.sigma_n},
                            {"linear_basis", m.hp.linear_basis},
                            {"lengthscales", vector_to_json(m.hp.lengthscales)}};
    j["arrays"] = {{"train_x", matrix_to_json(m.train_x)},
                   {"chol_lower", matrix_to_json(m.chol_lower)},
                   {"basis_coefficients", vector_to_json(m.basis_coefficients)},
                   {"residual_weights", vector_to_json(m.residual_weights)}};
    j["jitter"] = m.jitter;
    j["pipeline_fingerprint"] = fingerprint_to_hex(m.pipeline_fingerprint);
    return j;
}

GprModel gpr_from_json(const json& j) {
    GprModel m;
    const auto& hp = j.at("hyperparameters");
    m.hp.alpha = hp.at("alpha").get<double>();
    m.hp.sigma_f = hp.at("sigma_f").get<double>();
    m.hp.sigma_n = hp.at("sigma_n").get<double>();
    m.hp.linear_basis = hp.at("linear_basis").get<bool>();
    m.hp.lengthscales = vector_from_json(hp.at("lengthscales"));
    m.train_x = matrix_from_json(j.at("arrays").at("train_x"));
    m.chol_lower = matrix_from_json(j.at("arrays").at("chol_lower"));
    m.basis_coefficients = vector_from_json(j.at("arrays").at("basis_coefficients"));
    m.residual_weights = vector_from_json(j.at("arrays").at("residual_weights"));
    m.jitter = j.at("jitter").get<double>();
    m.pipeline_fingerprint = fingerprint_from_hex(j.at("pipeline_fingerprint").get<std::string>());
    return m;
}

json elm_to_json(const ElmModel& m) {
    json j;
    j["kind"] = "elm";
    j["hyperparameters"] = {{"hidden_count", m.spec.hidden_count},
                            {"ridge_lambda", m.spec.ridge_lambda},
                            {"activation", m.spec.activation == ElmActivation::Tanh ? "tanh"
                                                                                    : "sigmoid"},
                            {"seed", m.spec.seed}};
    j["arrays"] = {{"input_weights", matrix_to_json(m.input_weights)},
                   {"biases", vector_to_json(m.biases)},
                   {"output_weights", vector_to_json(m.output_weights)}};
    return j;
}

ElmModel elm_from_json(const json& j) {
    ElmModel m;
    const auto& hp = j.at("hyperparameters");
    m.spec.hidden_count = hp.at("hidden_count").get<int>();
    m.spec.ridge_lambda = hp.at("ridge_lambda").get<double>();
    m.spec.activation = hp.at("activation").get<std::string>() == "tanh" ? ElmActivation::Tanh
                                                                         : ElmActivation::Sigmoid;
    m.spec.seed = hp.at("seed").get<std::uint64_t>();
    m.input_weights = matrix_from_json(j.at("arrays").at("input_weights"));
    m.biases = vector_from_json(j.at("arrays").at("biases"));
    m.output_weights = vector_from_json(j.at("arrays").at("output_weights"));
    return m;
}

namespace {

const char* mlp_activation_name(MlpActivation a) {
    switch (a) {
        case MlpActivation::Relu: return "relu";
        case MlpActivation::Sigmoid: return "sigmoid";
        case MlpActivation::Tanh: return "tanh";
    }
    return "tanh";
}

MlpActivation mlp_activation_from_name(const std::string& name) {
    if (name == "relu") return MlpActivation::Relu;
    if (name == "sigmoid") return MlpActivation::Sigmoid;
    if (name == "tanh") return MlpActivation::Tanh;
    throw ConfigTypeError("unknown MLP activation '" + name + "'");
}

}  // namespace

json mlp_to_json(const MlpModel& m) {
    json j;
    j["kind"] = "mlp";
    j["hyperparameters"] = {{"hidden_sizes", m.spec.hidden_sizes},
                            {"activation", mlp_activation_name(m.spec.activation)},
                            {"epochs", m.spec.epochs},
                            {"step_size", m.spec.step_size},
                            {"batch_size", m.spec.batch_size},
                            {"seed", m.spec.seed}};
    json layers = json::array();
    for (std::size_t l = 0; l < m.weights.size(); ++l)
        layers.push_back({{"weights", matrix_to_json(m.weights[l])},
                          {"biases", vector_to_json(m.biases[l])}});
    j["arrays"] = {{"layers", layers}};
    return j;
}

MlpModel mlp_from_json(const json& j) {
    MlpModel m;
    const auto& hp = j.at("hyperparameters");
    m.spec.hidden_sizes = hp.at("hidden_sizes").get<std::vector<int>>();
    m.spec.activation = mlp_activation_from_name(hp.at("activation").get<std::string>());
    m.spec.epochs = hp.at("epochs").get<int>();
    m.spec.step_size = hp.at("step_size").get<double>();
    m.spec.batch_size = hp.at("batch_size").get<int>();
    m.spec.seed = hp.at("seed").get<std::uint64_t>();
    for (const auto& layer : j.at("arrays").at("layers")) {
        m.weights.push_back(matrix_from_json(layer.at("weights")));
        m.biases.push_back(vector_from_json(layer.at("biases")));
    }
    return m;
}

json svr_to_json(const SvrModel& m) {
    json j;
    j["kind"] = "svr";
    j["hyperparameters"] = {{"kernel", m.spec.kernel == SvrKernel::Rbf ? "rbf" : "linear"},
                            {"gamma", m.spec.gamma},
                            {"box_c", m.spec.box_c},
                            {"epsilon", m.spec.epsilon},
                            {"tolerance", m.spec.tolerance},
                            {"max_passes", m.spec.max_passes}};
    j["arrays"] = {{"support_vectors", matrix_to_json(m.support_vectors)},
                   {"dual_coefficients", vector_to_json(m.dual_coefficients)}};
    j["bias"] = m.bias;
    j["kkt_gap"] = m.kkt_gap;
    return j;
}

SvrModel svr_from_json(const json& j) {
    SvrModel m;
    const auto& hp = j.at("hyperparameters");
    m.spec.kernel = hp.at("kernel").get<std::string>() == "rbf" ? SvrKernel::Rbf
                                                                : SvrKernel::Linear;
    m.spec.gamma = hp.at("gamma").get<double>();
    m.spec.box_c = hp.at("box_c").get<double>();
    m.spec.epsilon = hp.at("epsilon").get<double>();
    m.spec.tolerance = hp.at("tolerance").get<double>();
    m.spec.max_passes = hp.at("max_passes").get<int>();
    m.support_vectors = matrix_from_json(j.at("arrays").at("support_vectors"));
    m.dual_coefficients = vector_from_json(j.at("arrays").at("dual_coefficients"));
    m.bias = j.at("bias").get<double>();
    m.kkt_gap = j.at("kkt_gap").get<double>();
    return m;
}

json gam_to_json(const GamModel& m) {
    json j;
    j["kind"] = "gam";
    j["hyperparameters"] = {{"rounds", m.spec.rounds}, {"learning_rate", m.spec.learning_rate}};
    json shapes = json::array();
    for (const auto& shape : m.shape_functions) {
        json stumps = json::array();
        for (const auto& s : shape)
            stumps.push_back({{"threshold", s.threshold},
                              {"left", s.left_value},
                              {"right", s.right_value}});
        shapes.push_back(stumps);
    }
    j["intercept"] = m.intercept;
    j["arrays"] = {{"shape_functions", shapes}};
    return j;
}

GamModel gam_from_json(const json& j) {
    GamModel m;
    const auto& hp = j.at("hyperparameters");
    m.spec.rounds = hp.at("rounds").get<int>();
    m.spec.learning_rate = hp.at("learning_rate").get<double>();
    m.intercept = j.at("intercept").get<double>();
    for (const auto& shape : j.at("arrays").at("shape_functions")) {
        std::vector<GamStump> stumps;
        for (const auto& s : shape)
            stumps.push_back({s.at("threshold").get<double>(), s.at("left").get<double>(),
                              s.at("right").get<double>()});
        m.shape_functions.push_back(std::move(stumps));
    }
    return m;
}

Eigen::Vector3d TrainedBundle::predict_yields(const CoPyrolysisRecord& rec) const {
    const Eigen::VectorXd scores = transform_input_vector(pipeline, rec);
    const Eigen::MatrixXd q = scores.transpose();
    Eigen::Vector3d normalized;
    for (int output = 0; output < 3; ++output) {
        switch (kind) {
            case RegressorKind::Gpr:
                normalized[output] = gpr_predict_mean(gpr[static_cast<std::size_t>(output)], q)[0];
                break;
            case RegressorKind::Elm:
                normalized[output] = elm_predict(elm[static_cast<std::size_t>(output)], q)[0];
                break;
            case RegressorKind::Mlp:
                normalized[output] = mlp_predict(mlp[static_cast<std::size_t>(output)], q)[0];
                break;
            case RegressorKind::Svr:
                normalized[output] = svr_predict(svr[static_cast<std::size_t>(output)], q)[0];
                break;
            case RegressorKind::Gam:
                normalized[output] = gam_predict(gam[static_cast<std::size_t>(output)], q)[0];
                break;
        }
    }
    return invert_targets(pipeline, normalized);
}

TrainedBundle train_bundle(RegressorKind kind, const RegressorSpec& spec,
                           const std::vector<CoPyrolysisRecord>& records,
                           const PipelineOptions& options) {
    return train_bundle(kind, std::array<RegressorSpec, 3>{spec, spec, spec}, records, options);
}

TrainedBundle train_bundle(RegressorKind kind, const std::array<RegressorSpec, 3>& specs,
                           const std::vector<CoPyrolysisRecord>& records,
                           const PipelineOptions& options) {
    TrainedBundle bundle;
    bundle.kind = kind;
    bundle.pipeline = fit_pipeline(records, options);
    const Eigen::MatrixXd x = transform_inputs(bundle.pipeline, records);
    const Eigen::MatrixXd y = transform_targets(bundle.pipeline, records);
    const std::uint64_t fp = bundle.pipeline.fingerprint();

    for (int output = 0; output < 3; ++output) {
        RegressorSpec output_spec = specs[static_cast<std::size_t>(output)];
        output_spec.kind = kind;
        output_spec.seed =
            Rng(output_spec.seed)
                .substream("train-output", static_cast<std::uint64_t>(output))
                .next_u64();
        const int dim = static_cast<int>(x.cols());
        validate_spec(output_spec, dim);
        switch (kind) {
            case RegressorKind::Gpr: {
                GprHyper hp;
                hp.alpha = output_spec.get_or("alpha", 1.174);
                hp.sigma_f = output_spec.get_or("sigma_f", 0.160);
                hp.sigma_n = output_spec.get_or("sigma_n", 0.05);
                hp.linear_basis = output_spec.get_or("linear_basis", 1.0) != 0.0;
                const double ell = output_spec.get_or("ell", 1.0);
                hp.lengthscales.resize(dim);
                for (int i = 0; i < dim; ++i)
                    hp.lengthscales[i] =
                        ell * output_spec.get_or("ell_mult_" + std::to_string(i), 1.0);
                GprModel m = gpr_fit(x, y.col(output), hp);
                m.pipeline_fingerprint = fp;
                bundle.gpr.push_back(std::move(m));
                break;
            }
            case RegressorKind::Elm: {
                ElmSpec es;
                es.hidden_count =
                    static_cast<int>(std::lround(output_spec.get_or("hidden_count", 64)));
                es.ridge_lambda = output_spec.get_or("ridge_lambda", 1e-4);
                es.seed = output_spec.seed;
                bundle.elm.push_back(elm_fit(x, y.col(output), es));
                break;
            }
            case RegressorKind::Mlp: {
                MlpSpec ms;
                ms.hidden_sizes = {
                    static_cast<int>(std::lround(output_spec.get_or("hidden", 16)))};
                ms.step_size = output_spec.get_or("step_size", 0.05);
                ms.epochs = static_cast<int>(std::lround(output_spec.get_or("epochs", 200)));
                ms.batch_size =
                    static_cast<int>(std::lround(output_spec.get_or("batch_size", 16)));
                ms.seed = output_spec.seed;
                bundle.mlp.push_back(mlp_fit(x, y.col(output), ms));
                break;
            }
            case RegressorKind::Svr: {
                SvrSpec ss;
                ss.box_c = output_spec.get_or("box_c", 10.0);
                ss.epsilon = output_spec.get_or("epsilon", 0.01);
                ss.gamma = output_spec.get_or("gamma", 1.0);
                bundle.svr.push_back(svr_fit(x, y.col(output), ss));
                break;
            }
            case RegressorKind::Gam: {
                GamSpec gs;
                gs.rounds = static_cast<int>(std::lround(output_spec.get_or("rounds", 300)));
                gs.learning_rate = output_spec.get_or("learning_rate", 0.1);
                bundle.gam.push_back(gam_fit(x, y.col(output), gs));
                break;
            }
        }
    }
    return bundle;
}

json bundle_to_json(const TrainedBundle& bundle) {
    json j;
    j["format"] = "copyro-bundle";
    j["version"] = kBundleFormatVersion;
    j["kind"] = to_string(bundle.kind);
    j["pipeline"] = pipeline_to_json(bundle.pipeline);
    json models = json::array();
    for (int output = 0; output < 3; ++output) {
        switch (bundle.kind) {
            case RegressorKind::Gpr:
                models.push_back(gpr_to_json(bundle.gpr[static_cast<std::size_t>(output)]));
                break;
            case RegressorKind::Elm:
                models.push_back(elm_to_json(bundle.elm[static_cast<std::size_t>(output)]));
                break;
            case RegressorKind::Mlp:
                models.push_back(mlp_to_json(bundle.mlp[static_cast<std::size_t>(output)]));
                break;
            case RegressorKind::Svr:
                models.push_back(svr_to_json(bundle.svr[static_cast<std::size_t>(output)]));
                break;
            case RegressorKind::Gam:
                models.push_back(gam_to_json(bundle.gam[static_cast<std::size_t>(output)]));
                break;
        }
    }
    j["models"] = models;
    return j;
}

TrainedBundle bundle_from_json(const json& j) {
    check_format(j, "copyro-bundle");
    TrainedBundle bundle;
    bundle.kind = regressor_kind_from_string(j.at("kind").get<std::string>());
    bundle.pipeline = pipeline_from_json(j.at("pipeline"));
    for (const auto& model : j.at("models")) {
        switch (bundle.kind) {
            case RegressorKind::Gpr: bundle.gpr.push_back(gpr_from_json(model)); break;
            case RegressorKind::Elm: bundle.elm.push_back(elm_from_json(model)); break;
            case RegressorKind::Mlp: bundle.mlp.push_back(mlp_from_json(model)); break;
            case RegressorKind::Svr: bundle.svr.push_back(svr_from_json(model)); break;
            case RegressorKind::Gam: bundle.gam.push_back(gam_from_json(model)); break;
        }
    }
    return bundle;
}

void save_bundle(const TrainedBundle& bundle, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << bundle_to_json(bundle).dump(2) << '\n';
}

TrainedBundle load_bundle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigTypeError("invalid JSON in " + path + ": " + e.what());
    }
    return bundle_from_json(j);
}

}  // namespace copyro
