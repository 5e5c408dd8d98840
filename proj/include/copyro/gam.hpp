#pragma once

#include <Eigen/Dense>
#include <vector>

namespace copyro {

struct GamSpec {
    int rounds = 300;
    double learning_rate = 0.1;
};

struct GamStump {
    double threshold = 0.0;
    double left_value = 0.0;   // contribution when x <= threshold
    double right_value = 0.0;  // learning rate already applied
};

// Additive model of per-feature shape functions built by cyclic gradient
// boosting of depth-1 regression stumps (round r fits feature r mod d).
// Prediction decomposes exactly as intercept + sum_d shape_d(x_d).
struct GamModel {
    GamSpec spec;
    double intercept = 0.0;
    std::vector<std::vector<GamStump>> shape_functions;  // per feature
};

GamModel gam_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GamSpec& spec);
Eigen::VectorXd gam_predict(const GamModel& model, const Eigen::MatrixXd& query);
double gam_shape_value(const GamModel& model, int feature, double value);

}  // namespace copyro
