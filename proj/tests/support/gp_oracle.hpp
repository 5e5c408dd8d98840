// Dense-formula Gaussian process reference implementing the documented math
// through independent linear algebra: Gauss-Jordan inversion, a Jacobi
// log-determinant and the textbook pow() kernel. Test-only.
#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "copyro/gpr.hpp"
#include "support/oracles.hpp"

namespace oracles {

struct DenseGpOracle {
    Eigen::MatrixXd kn_inv;
    Eigen::MatrixXd train_x;
    copyro::GprHyper hp;
    Eigen::VectorXd beta;     // empty without basis
    Eigen::VectorXd weights;  // Kn^-1 (y - H beta)
    double nlml = 0.0;

    static double kernel(const copyro::GprHyper& hp, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b) {
        double r2 = 0.0;
        for (Eigen::Index d = 0; d < a.size(); ++d) {
            const double diff = (a[d] - b[d]) / hp.lengthscales[d];
            r2 += diff * diff;
        }
        return hp.sigma_f * hp.sigma_f * std::pow(1.0 + r2 / (2.0 * hp.alpha), -hp.alpha);
    }

    static DenseGpOracle fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                             const copyro::GprHyper& hp) {
        DenseGpOracle o;
        o.train_x = x;
        o.hp = hp;
        const Eigen::Index n = x.rows();
        Eigen::MatrixXd kn(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                kn(i, j) = kernel(hp, x.row(i).transpose(), x.row(j).transpose());
        kn.diagonal().array() += hp.sigma_n * hp.sigma_n;
        o.kn_inv = naive_inverse(kn);

        Eigen::VectorXd residual = y;
        if (hp.linear_basis) {
            Eigen::MatrixXd h(n, x.cols() + 1);
            h.col(0).setOnes();
            h.rightCols(x.cols()) = x;
            Eigen::MatrixXd a = h.transpose() * o.kn_inv * h;
            const double reg = 1e-10 * std::max(1.0, a.trace() / static_cast<double>(a.rows()));
            a.diagonal().array() += reg;
            o.beta = naive_inverse(a) * h.transpose() * o.kn_inv * y;
            residual -= h * o.beta;
        }
        o.weights = o.kn_inv * residual;

        double log_det = 0.0;
        for (double ev : jacobi_eigenvalues(kn)) log_det += std::log(ev);
        o.nlml = 0.5 * residual.dot(o.kn_inv * residual) + 0.5 * log_det +
                 0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
        return o;
    }

    void predict(const Eigen::VectorXd& q, double& mean, double& variance) const {
        const Eigen::Index n = train_x.rows();
        Eigen::VectorXd kq(n);
        for (Eigen::Index i = 0; i < n; ++i)
            kq[i] = kernel(hp, q, train_x.row(i).transpose());
        mean = kq.dot(weights);
        if (hp.linear_basis) {
            mean += beta[0];
            for (Eigen::Index d = 0; d < q.size(); ++d) mean += beta[d + 1] * q[d];
        }
        variance = hp.sigma_f * hp.sigma_f - kq.dot(kn_inv * kq);
    }
};

}  // namespace oracles
