#include "copyro/gam.hpp"

#include <algorithm>
#include <numeric>

#include "copyro/errors.hpp"

namespace copyro {

namespace {

struct StumpFit {
    bool valid = false;
    double threshold = 0.0;
    double left_mean = 0.0;
    double right_mean = 0.0;
};

// least-squares optimal split of the residuals along one feature
StumpFit fit_stump(const Eigen::MatrixXd& x, const Eigen::VectorXd& residual, int feature) {
    const Eigen::Index n = x.rows();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return x(a, feature) < x(b, feature);
    });

    double total = residual.sum();
    double left_sum = 0.0;
    StumpFit best;
    double best_score = -1.0;  // reduction in SSE relative to a constant fit
    for (Eigen::Index r = 0; r + 1 < n; ++r) {
        left_sum += residual[order[r]];
        const double xv = x(order[r], feature);
        const double xn = x(order[r + 1], feature);
        if (xn <= xv) continue;  // no split between equal values
        const auto nl = static_cast<double>(r + 1);
        const auto nr = static_cast<double>(n - r - 1);
        const double right_sum = total - left_sum;
        const double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
        if (score > best_score) {
            best_score = score;
            best.valid = true;
            best.threshold = 0.5 * (xv + xn);
            best.left_mean = left_sum / nl;
            best.right_mean = right_sum / nr;
        }
    }
    return best;
}

}  // namespace

GamModel gam_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GamSpec& spec) {
    if (spec.rounds < 0) throw RangeViolation("GAM rounds must be >= 0");
    if (!(spec.learning_rate > 0.0 && spec.learning_rate <= 1.0))
        throw RangeViolation("GAM learning rate must be in (0, 1]");
    if (x.rows() != y.size())
        throw DimensionMismatch("input row count does not match target length");

    GamModel model;
    model.spec = spec;
    model.intercept = y.mean();
    model.shape_functions.resize(static_cast<std::size_t>(x.cols()));

    Eigen::VectorXd residual = y.array() - model.intercept;
    Eigen::VectorXd cycle_residual = residual;
    const int d = static_cast<int>(x.cols());
    for (int round = 0; round < spec.rounds; ++round) {
        const int feature = round % d;
        // stumps within one round-robin cycle all fit the cycle-start
        // residual, so column permutations permute the shape functions
        if (feature == 0) cycle_residual = residual;
        const StumpFit fit = fit_stump(x, cycle_residual, feature);
        if (!fit.valid) continue;  // constant feature this round
        GamStump stump;
        stump.threshold = fit.threshold;
        stump.left_value = spec.learning_rate * fit.left_mean;
        stump.right_value = spec.learning_rate * fit.right_mean;
        model.shape_functions[static_cast<std::size_t>(feature)].push_back(stump);
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            residual[i] -= x(i, feature) <= stump.threshold ? stump.left_value
                                                            : stump.right_value;
    }
    return model;
}

double gam_shape_value(const GamModel& model, int feature, double value) {
    double acc = 0.0;
    for (const auto& stump : model.shape_functions[static_cast<std::size_t>(feature)])
        acc += value <= stump.threshold ? stump.left_value : stump.right_value;
    return acc;
}

Eigen::VectorXd gam_predict(const GamModel& model, const Eigen::MatrixXd& query) {
    if (query.cols() != static_cast<Eigen::Index>(model.shape_functions.size()))
        throw DimensionMismatch("query dimension does not match the trained GAM");
    Eigen::VectorXd out = Eigen::VectorXd::Constant(query.rows(), model.intercept);
    for (Eigen::Index i = 0; i < query.rows(); ++i)
        for (int f = 0; f < static_cast<int>(model.shape_functions.size()); ++f)
            out[i] += gam_shape_value(model, f, query(i, f));
    return out;
}

}  // namespace copyro
