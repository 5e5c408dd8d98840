#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace copyro {

// ARD Rational Quadratic kernel with an optional explicit linear basis:
//   k(x, x') = sigma_f^2 * (1 + r^2 / (2*alpha))^(-alpha),
//   r^2 = sum_d (x_d - x'_d)^2 / ell_d^2
struct GprHyper {
    double alpha = 1.174;    // scale-mixture parameter, > 0
    double sigma_f = 0.160;  // signal standard deviation, > 0
    double sigma_n = 0.05;   // noise standard deviation, >= 0
    Eigen::VectorXd lengthscales;  // one per input dimension, > 0
    bool linear_basis = true;
};

// Published per-output defaults (oil, char, syngas); the noise sd is
// not published and keeps the library default.
GprHyper gpr_reported_defaults(int output, int dim);

struct GprModel {
    GprHyper hp;
    Eigen::MatrixXd train_x;            // n x d
    Eigen::MatrixXd chol_lower;         // L with L*L^T = K + (sigma_n^2 + jitter)*I
    double jitter = 0.0;                // 0 when the plain factorization succeeded
    Eigen::VectorXd basis_coefficients; // d+1 (intercept first); empty without basis
    Eigen::VectorXd residual_weights;   // (K + sigma_n^2 I)^-1 (y - H beta)
    std::uint64_t pipeline_fingerprint = 0;  // 0 = standalone model
};

double rq_kernel(const GprHyper& hp, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Basis coefficients come from generalized least squares against the
// kernel-weighted residuals; a fixed Tikhonov term
// 1e-10 * max(1, trace(A)/(d+1)) keeps rank-deficient systems (n <= d)
// solvable. The kernel matrix is factored with an adaptive jitter ladder:
// plain Cholesky first, then 1e-10 growing tenfold up to 1e-4
// (NotPositiveDefinite once exhausted).
GprModel gpr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GprHyper& hp);

// Posterior mean and variance (variance clamped at zero). The variance is
// the kernel conditional k** - k*^T K^-1 k*; the basis contributes to the
// mean only.
void gpr_predict(const GprModel& model, const Eigen::MatrixXd& query, Eigen::VectorXd& mean,
                 Eigen::VectorXd& variance);
Eigen::VectorXd gpr_predict_mean(const GprModel& model, const Eigen::MatrixXd& query);

// Negative log marginal likelihood (profiled over the basis coefficients
// when the basis is enabled): 0.5*r^T K^-1 r + 0.5*log|K| + n/2*log(2*pi)
// with r = y - H*beta.
double gpr_nlml(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GprHyper& hp);

}  // namespace copyro
