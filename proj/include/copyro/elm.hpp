#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace copyro {

enum class ElmActivation { Sigmoid, Tanh };

struct ElmSpec {
    int hidden_count = 64;
    double ridge_lambda = 1e-4;
    ElmActivation activation = ElmActivation::Tanh;
    std::uint64_t seed = 0;
};

// Single hidden layer with frozen random weights; only the output layer is
// solved, by ridge least squares.
struct ElmModel {
    ElmSpec spec;
    Eigen::MatrixXd input_weights;  // hidden x d, uniform in [-1, 1]
    Eigen::VectorXd biases;         // hidden
    Eigen::VectorXd output_weights; // hidden
};

ElmModel elm_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ElmSpec& spec);
Eigen::VectorXd elm_predict(const ElmModel& model, const Eigen::MatrixXd& query);

// Exposed for the normal-equation residual check.
Eigen::MatrixXd elm_hidden_layer(const ElmModel& model, const Eigen::MatrixXd& x);

}  // namespace copyro
