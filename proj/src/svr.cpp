#include "copyro/svr.hpp"

#include <cmath>
#include <limits>

#include "copyro/errors.hpp"

namespace copyro {

namespace {

double kernel_one(const SvrSpec& spec, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    switch (spec.kernel) {
        case SvrKernel::Rbf: return std::exp(-spec.gamma * (a - b).squaredNorm());
        case SvrKernel::Linear: return a.dot(b);
    }
    return 0.0;
}

}  // namespace

Eigen::MatrixXd svr_kernel_matrix(const SvrSpec& spec, const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b) {
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
            k(i, j) = kernel_one(spec, a.row(i).transpose(), b.row(j).transpose());
    return k;
}

double svr_dual_objective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                          double epsilon, const Eigen::VectorXd& beta) {
    return 0.5 * beta.dot(kernel * beta) + epsilon * beta.cwiseAbs().sum() - y.dot(beta);
}

namespace {

// one-sided derivatives of the dual at beta_i, accounting for the |beta_i| kink
double right_derivative(double kb, double y, double eps, double beta) {
    return kb - y + (beta >= 0.0 ? eps : -eps);
}
double left_derivative(double kb, double y, double eps, double beta) {
    return kb - y + (beta > 0.0 ? eps : -eps);
}

// exact minimization of the pair subproblem: t = beta_i, beta_j = s - t,
// objective phi(t) piecewise quadratic with breakpoints at 0 and s
double solve_pair(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double eps, double c,
                  const Eigen::VectorXd& kbeta, const Eigen::VectorXd& beta, Eigen::Index i,
                  Eigen::Index j) {
    const double s = beta[i] + beta[j];
    const double t_lo = std::max(-c, s - c);
    const double t_hi = std::min(c, s + c);
    // smooth part: phi(t) = 0.5*kappa*t^2 + g*t + eps*|t| + eps*|s-t| + const,
    // derived from the quadratic form restricted to coordinates i and j
    const double kappa = k(i, i) + k(j, j) - 2.0 * k(i, j);
    const double ri = kbeta[i] - k(i, i) * beta[i] - k(i, j) * beta[j];
    const double rj = kbeta[j] - k(j, i) * beta[i] - k(j, j) * beta[j];
    const double g = ri - rj - (y[i] - y[j]) + k(i, j) * s - k(j, j) * s;

    auto phi = [&](double t) {
        return 0.5 * kappa * t * t + g * t + eps * (std::abs(t) + std::abs(s - t));
    };

    double best_t = beta[i];
    double best_phi = phi(best_t);
    auto consider = [&](double t) {
        t = std::min(std::max(t, t_lo), t_hi);
        const double v = phi(t);
        if (v < best_phi - 1e-15) {
            best_phi = v;
            best_t = t;
        }
    };

    consider(t_lo);
    consider(t_hi);
    consider(0.0);
    consider(s);
    if (kappa > 0.0) {
        // stationary points of each sign region: kappa*t + g + eps*(sgn(t) - sgn(s-t)) = 0
        for (double si : {-1.0, 1.0})
            for (double sj : {-1.0, 1.0}) consider(-(g + eps * (si - sj)) / kappa);
    }
    return best_t;
}

}  // namespace

SvrModel svr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrSpec& spec) {
    if (!(spec.box_c > 0.0)) throw RangeViolation("SVR box constraint must be positive");
    if (spec.epsilon < 0.0) throw RangeViolation("SVR epsilon must be non-negative");
    if (x.rows() != y.size())
        throw DimensionMismatch("input row count does not match target length");
    const Eigen::Index n = x.rows();

    const Eigen::MatrixXd k = svr_kernel_matrix(spec, x, x);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd kbeta = Eigen::VectorXd::Zero(n);
    const double c = spec.box_c;
    const double eps = spec.epsilon;

    double gap = std::numeric_limits<double>::infinity();
    double nu_mid = 0.0;
    int pass = 0;
    for (; pass < spec.max_passes; ++pass) {
        // most violating pair: the KKT multiplier bracket
        // [max(-right_deriv) over increasable, min(-left_deriv) over decreasable]
        double up = -std::numeric_limits<double>::infinity();
        double down = std::numeric_limits<double>::infinity();
        Eigen::Index i_up = -1, i_down = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (beta[i] < c) {
                const double v = -right_derivative(kbeta[i], y[i], eps, beta[i]);
                if (v > up) {
                    up = v;
                    i_up = i;
                }
            }
            if (beta[i] > -c) {
                const double v = -left_derivative(kbeta[i], y[i], eps, beta[i]);
                if (v < down) {
                    down = v;
                    i_down = i;
                }
            }
        }
        gap = up - down;
        nu_mid = 0.5 * (up + down);
        if (gap <= spec.tolerance || i_up < 0 || i_down < 0 || i_up == i_down) break;

        const double old = beta[i_up];
        const double t = solve_pair(k, y, eps, c, kbeta, beta, i_up, i_down);
        const double s = beta[i_up] + beta[i_down];
        if (std::abs(t - old) < 1e-15) break;  // numerically stuck on a flat pair
        beta[i_up] = t;
        beta[i_down] = s - t;
        kbeta += k.col(i_up) * (beta[i_up] - old) + k.col(i_down) * (beta[i_down] - (s - old));
    }
    if (gap > spec.tolerance && pass >= spec.max_passes)
        throw SolverNotConverged("SVR pass cap reached with KKT gap " + std::to_string(gap));

    SvrModel model;
    model.spec = spec;
    model.bias = nu_mid;
    model.kkt_gap = std::max(gap, 0.0);
    model.passes = pass;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(beta[i]) > 1e-12) sv.push_back(i);
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
    model.dual_coefficients.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t r = 0; r < sv.size(); ++r) {
        model.support_vectors.row(static_cast<Eigen::Index>(r)) = x.row(sv[r]);
        model.dual_coefficients[static_cast<Eigen::Index>(r)] = beta[sv[r]];
    }
    return model;
}

Eigen::VectorXd svr_predict(const SvrModel& model, const Eigen::MatrixXd& query) {
    if (model.support_vectors.rows() == 0)
        return Eigen::VectorXd::Constant(query.rows(), model.bias);
    if (query.cols() != model.support_vectors.cols())
        throw DimensionMismatch("query dimension does not match the trained SVR");
    return svr_kernel_matrix(model.spec, query, model.support_vectors) *
               model.dual_coefficients +
           Eigen::VectorXd::Constant(query.rows(), model.bias).eval();
}

}  // namespace copyro
