#include "copyro/mlp.hpp"

#include <cmath>
#include <numeric>

#include "copyro/errors.hpp"
#include "copyro/rng.hpp"

namespace copyro {

namespace {

double activate(MlpActivation act, double v) {
    switch (act) {
        case MlpActivation::Relu: return v > 0.0 ? v : 0.0;
        case MlpActivation::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
        case MlpActivation::Tanh: return std::tanh(v);
    }
    return v;
}

// derivative expressed through the activation output
double activate_grad(MlpActivation act, double out) {
    switch (act) {
        case MlpActivation::Relu: return out > 0.0 ? 1.0 : 0.0;
        case MlpActivation::Sigmoid: return out * (1.0 - out);
        case MlpActivation::Tanh: return 1.0 - out * out;
    }
    return 1.0;
}

struct ForwardPass {
    std::vector<Eigen::MatrixXd> activations;  // per layer, rows = samples
};

ForwardPass forward(const MlpModel& model, const Eigen::MatrixXd& x) {
    ForwardPass fp;
    fp.activations.push_back(x);
    const std::size_t layers = model.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd z = fp.activations.back() * model.weights[l].transpose();
        z.rowwise() += model.biases[l].transpose();
        if (l + 1 < layers) {  // output layer stays linear
            for (Eigen::Index i = 0; i < z.rows(); ++i)
                for (Eigen::Index j = 0; j < z.cols(); ++j)
                    z(i, j) = activate(model.spec.activation, z(i, j));
        }
        fp.activations.push_back(std::move(z));
    }
    return fp;
}

// accumulates MSE gradient over the given rows; returns the batch loss
double backward(const MlpModel& model, const ForwardPass& fp, const Eigen::VectorXd& y,
                std::vector<Eigen::MatrixXd>& grad_w, std::vector<Eigen::VectorXd>& grad_b) {
    const std::size_t layers = model.weights.size();
    const auto n = static_cast<double>(y.size());
    const Eigen::VectorXd pred = fp.activations.back().col(0);
    const Eigen::VectorXd err = pred - y;
    const double loss = err.squaredNorm() / n;

    // delta for the linear output layer: dL/dz = 2*(pred - y)/n
    Eigen::MatrixXd delta = (2.0 / n) * err;
    for (std::size_t l = layers; l-- > 0;) {
        grad_w[l] = delta.transpose() * fp.activations[l];
        grad_b[l] = delta.colwise().sum().transpose();
        if (l > 0) {
            Eigen::MatrixXd next = delta * model.weights[l];
            const Eigen::MatrixXd& out = fp.activations[l];
            for (Eigen::Index i = 0; i < next.rows(); ++i)
                for (Eigen::Index j = 0; j < next.cols(); ++j)
                    next(i, j) *= activate_grad(model.spec.activation, out(i, j));
            delta = std::move(next);
        }
    }
    return loss;
}

}  // namespace

MlpModel mlp_init(int input_dim, const MlpSpec& spec) {
    if (spec.hidden_sizes.empty()) throw RangeViolation("MLP needs at least one hidden layer");
    for (int h : spec.hidden_sizes)
        if (h < 1) throw RangeViolation("MLP hidden sizes must be >= 1");

    MlpModel model;
    model.spec = spec;
    std::vector<int> sizes;
    sizes.push_back(input_dim);
    sizes.insert(sizes.end(), spec.hidden_sizes.begin(), spec.hidden_sizes.end());
    sizes.push_back(1);

    Rng rng = Rng(spec.seed).substream("mlp-init");
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l];
        const int fan_out = sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) w(i, j) = rng.uniform(-limit, limit);
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return model;
}

MlpModel mlp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpSpec& spec) {
    if (spec.epochs < 0) throw RangeViolation("MLP epochs must be >= 0");
    if (!(spec.step_size > 0.0)) throw RangeViolation("MLP step size must be positive");
    if (x.rows() != y.size())
        throw DimensionMismatch("input row count does not match target length");

    MlpModel model = mlp_init(static_cast<int>(x.cols()), spec);
    const auto n = static_cast<std::size_t>(x.rows());
    const int batch = std::max(1, std::min<int>(spec.batch_size, static_cast<int>(n)));

    Rng rng = Rng(spec.seed).substream("mlp-shuffle");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Eigen::MatrixXd> grad_w(model.weights.size());
    std::vector<Eigen::VectorXd> grad_b(model.biases.size());

    for (int epoch = 0; epoch < spec.epochs; ++epoch) {
        rng.shuffle(order.begin(), order.end());
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t count = std::min<std::size_t>(batch, n - start);
            Eigen::MatrixXd bx(count, x.cols());
            Eigen::VectorXd by(count);
            for (std::size_t i = 0; i < count; ++i) {
                bx.row(i) = x.row(static_cast<Eigen::Index>(order[start + i]));
                by[i] = y[static_cast<Eigen::Index>(order[start + i])];
            }
            const ForwardPass fp = forward(model, bx);
            epoch_loss += backward(model, fp, by, grad_w, grad_b);
            ++batches;
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                model.weights[l] -= spec.step_size * grad_w[l];
                model.biases[l] -= spec.step_size * grad_b[l];
            }
        }
        epoch_loss /= static_cast<double>(batches);
        if (!std::isfinite(epoch_loss))
            throw DivergedTraining("MLP training loss became non-finite at epoch " +
                                   std::to_string(epoch));
        model.epoch_losses.push_back(epoch_loss);
    }
    for (const auto& w : model.weights)
        if (!w.allFinite()) throw DivergedTraining("MLP weights became non-finite");
    return model;
}

Eigen::VectorXd mlp_predict(const MlpModel& model, const Eigen::MatrixXd& query) {
    if (query.cols() != model.weights.front().cols())
        throw DimensionMismatch("query dimension does not match the trained MLP");
    return forward(model, query).activations.back().col(0);
}

double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd pred = forward(model, x).activations.back().col(0);
    return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

Eigen::VectorXd mlp_loss_gradient(const MlpModel& model, const Eigen::MatrixXd& x,
                                  const Eigen::VectorXd& y) {
    std::vector<Eigen::MatrixXd> grad_w(model.weights.size());
    std::vector<Eigen::VectorXd> grad_b(model.biases.size());
    const ForwardPass fp = forward(model, x);
    backward(model, fp, y, grad_w, grad_b);
    std::size_t total = 0;
    for (std::size_t l = 0; l < grad_w.size(); ++l)
        total += static_cast<std::size_t>(grad_w[l].size() + grad_b[l].size());
    Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < grad_w.size(); ++l) {
        for (Eigen::Index j = 0; j < grad_w[l].cols(); ++j)
            for (Eigen::Index i = 0; i < grad_w[l].rows(); ++i) flat[at++] = grad_w[l](i, j);
        for (Eigen::Index i = 0; i < grad_b[l].size(); ++i) flat[at++] = grad_b[l][i];
    }
    return flat;
}

Eigen::VectorXd mlp_get_parameters(const MlpModel& model) {
    std::size_t total = 0;
    for (std::size_t l = 0; l < model.weights.size(); ++l)
        total += static_cast<std::size_t>(model.weights[l].size() + model.biases[l].size());
    Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        for (Eigen::Index j = 0; j < model.weights[l].cols(); ++j)
            for (Eigen::Index i = 0; i < model.weights[l].rows(); ++i)
                flat[at++] = model.weights[l](i, j);
        for (Eigen::Index i = 0; i < model.biases[l].size(); ++i)
            flat[at++] = model.biases[l][i];
    }
    return flat;
}

void mlp_set_parameters(MlpModel& model, const Eigen::VectorXd& flat) {
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        for (Eigen::Index j = 0; j < model.weights[l].cols(); ++j)
            for (Eigen::Index i = 0; i < model.weights[l].rows(); ++i)
                model.weights[l](i, j) = flat[at++];
        for (Eigen::Index i = 0; i < model.biases[l].size(); ++i)
            model.biases[l][i] = flat[at++];
    }
    if (at != flat.size()) throw DimensionMismatch("flattened parameter length mismatch");
}

}  // namespace copyro
