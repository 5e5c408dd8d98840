#include "copyro/gpr.hpp"

#include <cmath>

#include "copyro/errors.hpp"

namespace copyro {

GprHyper gpr_reported_defaults(int output, int dim) {
    GprHyper hp;
    switch (output) {
        case 0: hp.alpha = 1.174; hp.sigma_f = 0.160; break;  // oil
        case 1: hp.alpha = 1.158; hp.sigma_f = 0.139; break;  // char
        case 2: hp.alpha = 1.158; hp.sigma_f = 0.139; break;  // syngas
        default: throw DimensionMismatch("output index must be 0, 1 or 2");
    }
    hp.lengthscales = Eigen::VectorXd::Ones(dim);
    return hp;
}

double rq_kernel(const GprHyper& hp, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double r2 = ((a - b).array() / hp.lengthscales.array()).square().sum();
    return hp.sigma_f * hp.sigma_f * std::exp(-hp.alpha * std::log1p(r2 / (2.0 * hp.alpha)));
}

namespace {

void check_hyper(const GprHyper& hp, Eigen::Index d) {
    if (!(hp.alpha > 0.0) || !(hp.sigma_f > 0.0) || !(hp.sigma_n >= 0.0))
        throw RangeViolation("GPR hyperparameters must satisfy alpha>0, sigma_f>0, sigma_n>=0");
    if (hp.lengthscales.size() != d)
        throw DimensionMismatch("lengthscale count does not match input dimension");
    if ((hp.lengthscales.array() <= 0.0).any())
        throw RangeViolation("GPR lengthscales must be positive");
}

// squared lengthscale-weighted distances via the Gram expansion
// ||a-b||^2 = ||a||^2 + ||b||^2 - 2 a.b, computed on pre-scaled rows
Eigen::MatrixXd scaled_sqdist(const GprHyper& hp, const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b) {
    const Eigen::ArrayXXd inv_ell = hp.lengthscales.transpose().array().inverse();
    const Eigen::MatrixXd as = a.array().rowwise() * inv_ell.row(0);
    const Eigen::MatrixXd bs = b.array().rowwise() * inv_ell.row(0);
    const Eigen::VectorXd an = as.rowwise().squaredNorm();
    const Eigen::VectorXd bn = bs.rowwise().squaredNorm();
    Eigen::MatrixXd d = -2.0 * as * bs.transpose();
    d.colwise() += an;
    d.rowwise() += bn.transpose();
    return d.cwiseMax(0.0);
}

Eigen::MatrixXd rq_of_sqdist(const GprHyper& hp, const Eigen::MatrixXd& r2) {
    return (hp.sigma_f * hp.sigma_f) *
           ((-hp.alpha) * (r2.array() / (2.0 * hp.alpha)).log1p()).exp();
}

Eigen::MatrixXd kernel_matrix(const GprHyper& hp, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd k = rq_of_sqdist(hp, scaled_sqdist(hp, x, x));
    k.diagonal().setConstant(hp.sigma_f * hp.sigma_f);
    // exact symmetry keeps the Cholesky deterministic
    k = 0.5 * (k + k.transpose()).eval();
    return k;
}

Eigen::MatrixXd cross_kernel(const GprHyper& hp, const Eigen::MatrixXd& query,
                             const Eigen::MatrixXd& train) {
    return rq_of_sqdist(hp, scaled_sqdist(hp, query, train));
}

Eigen::MatrixXd basis_matrix(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd h(x.rows(), x.cols() + 1);
    h.col(0).setOnes();
    h.rightCols(x.cols()) = x;
    return h;
}

// plain Cholesky first, then the jitter ladder; `shifted_out` receives the
// matrix actually factored
Eigen::LLT<Eigen::MatrixXd> factor_with_jitter(const Eigen::MatrixXd& k, double sigma_n,
                                               double& jitter_out,
                                               Eigen::MatrixXd& shifted_out) {
    const Eigen::Index n = k.rows();
    shifted_out = k;
    shifted_out.diagonal().array() += sigma_n * sigma_n;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted_out);
    if (llt.info() == Eigen::Success) {
        jitter_out = 0.0;
        return llt;
    }
    for (double jitter = 1e-10; jitter <= 1e-4 * (1.0 + 1e-9); jitter *= 10.0) {
        Eigen::MatrixXd j = shifted_out + jitter * Eigen::MatrixXd::Identity(n, n);
        llt.compute(j);
        if (llt.info() == Eigen::Success) {
            jitter_out = jitter;
            shifted_out = std::move(j);
            return llt;
        }
    }
    throw NotPositiveDefinite("kernel matrix not positive definite after jitter up to 1e-4");
}

// two rounds of iterative refinement; ill-conditioned noise-free systems
// otherwise leave training-point residuals far above solver precision
Eigen::VectorXd refined_solve(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              const Eigen::MatrixXd& shifted, const Eigen::VectorXd& rhs) {
    Eigen::VectorXd w = llt.solve(rhs);
    for (int round = 0; round < 2; ++round) w += llt.solve(rhs - shifted * w);
    return w;
}

Eigen::VectorXd gls_basis_coefficients(const Eigen::LLT<Eigen::MatrixXd>& llt,
                                       const Eigen::MatrixXd& h, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd kinv_h = llt.solve(h);
    Eigen::MatrixXd a = h.transpose() * kinv_h;
    const Eigen::VectorXd b = kinv_h.transpose() * y;
    const double reg = 1e-10 * std::max(1.0, a.trace() / static_cast<double>(a.rows()));
    a.diagonal().array() += reg;
    return Eigen::LDLT<Eigen::MatrixXd>(a).solve(b);
}

}  // namespace

GprModel gpr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GprHyper& hp) {
    if (x.rows() < 1) throw DimensionMismatch("GPR needs at least one training point");
    if (x.rows() != y.size())
        throw DimensionMismatch("input row count does not match target length");
    if (!x.allFinite() || !y.allFinite())
        throw RangeViolation("GPR training data must be finite");
    check_hyper(hp, x.cols());

    GprModel model;
    model.hp = hp;
    model.train_x = x;

    const Eigen::MatrixXd k = kernel_matrix(hp, x);
    Eigen::MatrixXd shifted;
    const auto llt = factor_with_jitter(k, hp.sigma_n, model.jitter, shifted);
    model.chol_lower = llt.matrixL();

    Eigen::VectorXd residual = y;
    if (hp.linear_basis) {
        const Eigen::MatrixXd h = basis_matrix(x);
        model.basis_coefficients = gls_basis_coefficients(llt, h, y);
        residual -= h * model.basis_coefficients;
    }
    model.residual_weights = refined_solve(llt, shifted, residual);
    return model;
}

void gpr_predict(const GprModel& model, const Eigen::MatrixXd& query, Eigen::VectorXd& mean,
                 Eigen::VectorXd& variance) {
    if (query.cols() != model.train_x.cols())
        throw DimensionMismatch("query dimension does not match the trained model");
    const Eigen::MatrixXd kq = cross_kernel(model.hp, query, model.train_x);
    mean = kq * model.residual_weights;
    if (model.hp.linear_basis) mean += basis_matrix(query) * model.basis_coefficients;

    variance.resize(query.rows());
    const auto& l = model.chol_lower;
    for (Eigen::Index i = 0; i < query.rows(); ++i) {
        const Eigen::VectorXd v =
            l.triangularView<Eigen::Lower>().solve(kq.row(i).transpose());
        const double var = model.hp.sigma_f * model.hp.sigma_f - v.squaredNorm();
        variance[i] = std::max(var, 0.0);
    }
}

Eigen::VectorXd gpr_predict_mean(const GprModel& model, const Eigen::MatrixXd& query) {
    if (query.cols() != model.train_x.cols())
        throw DimensionMismatch("query dimension does not match the trained model");
    const Eigen::MatrixXd kq = cross_kernel(model.hp, query, model.train_x);
    Eigen::VectorXd mean = kq * model.residual_weights;
    if (model.hp.linear_basis) mean += basis_matrix(query) * model.basis_coefficients;
    return mean;
}

double gpr_nlml(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GprHyper& hp) {
    if (x.rows() < 1) throw DimensionMismatch("NLML needs at least one training point");
    if (x.rows() != y.size())
        throw DimensionMismatch("input row count does not match target length");
    check_hyper(hp, x.cols());

    const Eigen::MatrixXd k = kernel_matrix(hp, x);
    double jitter = 0.0;
    Eigen::MatrixXd shifted;
    const auto llt = factor_with_jitter(k, hp.sigma_n, jitter, shifted);

    Eigen::VectorXd residual = y;
    if (hp.linear_basis) {
        const Eigen::MatrixXd h = basis_matrix(x);
        residual -= h * gls_basis_coefficients(llt, h, y);
    }
    const Eigen::VectorXd alpha = refined_solve(llt, shifted, residual);
    double log_det = 0.0;
    const Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += std::log(l(i, i));
    const double n = static_cast<double>(x.rows());
    return 0.5 * residual.dot(alpha) + log_det + 0.5 * n * std::log(2.0 * M_PI);
}

}  // namespace copyro
