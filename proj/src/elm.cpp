#include "copyro/elm.hpp"

#include <cmath>

#include "copyro/errors.hpp"
#include "copyro/rng.hpp"

namespace copyro {

namespace {

double activate(ElmActivation act, double v) {
    switch (act) {
        case ElmActivation::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
        case ElmActivation::Tanh: return std::tanh(v);
    }
    return v;
}

}  // namespace

Eigen::MatrixXd elm_hidden_layer(const ElmModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.input_weights.cols())
        throw DimensionMismatch("query dimension does not match the trained ELM");
    Eigen::MatrixXd h = x * model.input_weights.transpose();
    h.rowwise() += model.biases.transpose();
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            h(i, j) = activate(model.spec.activation, h(i, j));
    return h;
}

ElmModel elm_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ElmSpec& spec) {
    if (spec.hidden_count < 1) throw RangeViolation("ELM hidden_count must be >= 1");
    if (spec.ridge_lambda < 0.0) throw RangeViolation("ELM ridge lambda must be >= 0");
    if (x.rows() != y.size())
        throw DimensionMismatch("input row count does not match target length");

    ElmModel model;
    model.spec = spec;
    Rng rng = Rng(spec.seed).substream("elm-weights");
    model.input_weights.resize(spec.hidden_count, x.cols());
    model.biases.resize(spec.hidden_count);
    for (int i = 0; i < spec.hidden_count; ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            model.input_weights(i, j) = rng.uniform(-1.0, 1.0);
        model.biases[i] = rng.uniform(-1.0, 1.0);
    }

    const Eigen::MatrixXd h = elm_hidden_layer(model, x);
    Eigen::MatrixXd gram = h.transpose() * h;
    gram.diagonal().array() += spec.ridge_lambda;
    model.output_weights = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(h.transpose() * y);
    return model;
}

Eigen::VectorXd elm_predict(const ElmModel& model, const Eigen::MatrixXd& query) {
    return elm_hidden_layer(model, query) * model.output_weights;
}

}  // namespace copyro
