#pragma once

#include <Eigen/Dense>

namespace copyro {

enum class SvrKernel { Rbf, Linear };

struct SvrSpec {
    SvrKernel kernel = SvrKernel::Rbf;
    double gamma = 1.0;       // RBF width, exp(-gamma * ||a-b||^2)
    double box_c = 10.0;      // box constraint, > 0
    double epsilon = 0.01;    // tube width, >= 0
    double tolerance = 1e-6;  // KKT gap
    int max_passes = 100000;  // pair updates cap
};

// epsilon-insensitive support vector regression. Dual coefficients
// beta_i = alpha_i - alpha_i^* live in [-C, C] with sum(beta) = 0; the dual
//   minimize 0.5*beta^T K beta + epsilon*sum|beta_i| - y^T beta
// is solved by two-coordinate (SMO-style) updates on the most violating
// pair, each pair subproblem solved exactly over its piecewise-quadratic
// segments.
struct SvrModel {
    SvrSpec spec;
    Eigen::MatrixXd support_vectors;  // s x d
    Eigen::VectorXd dual_coefficients;  // s, nonzero entries only
    double bias = 0.0;
    double kkt_gap = 0.0;  // final max violation
    int passes = 0;
};

SvrModel svr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrSpec& spec);
Eigen::VectorXd svr_predict(const SvrModel& model, const Eigen::MatrixXd& query);

// Dual objective for a full coefficient vector; shared with the brute-force
// oracle tests.
double svr_dual_objective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                          double epsilon, const Eigen::VectorXd& beta);
Eigen::MatrixXd svr_kernel_matrix(const SvrSpec& spec, const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b);

}  // namespace copyro
