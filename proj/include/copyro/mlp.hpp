#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace copyro {

enum class MlpActivation { Relu, Sigmoid, Tanh };

struct MlpSpec {
    std::vector<int> hidden_sizes = {16};
    MlpActivation activation = MlpActivation::Tanh;
    int epochs = 200;
    double step_size = 0.05;
    int batch_size = 16;
    std::uint64_t seed = 0;
};

// Fully connected net with a linear output unit, trained by mini-batch
// gradient descent on mean squared error with seeded shuffling.
struct MlpModel {
    MlpSpec spec;
    std::vector<Eigen::MatrixXd> weights;  // layer l: out x in
    std::vector<Eigen::VectorXd> biases;
    std::vector<double> epoch_losses;  // mean training loss per epoch
};

MlpModel mlp_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpSpec& spec);
Eigen::VectorXd mlp_predict(const MlpModel& model, const Eigen::MatrixXd& query);

// Full-batch MSE loss and its gradient in flattened parameter order
// (weights then bias, layer by layer). Used by training and by the
// finite-difference gradient check.
double mlp_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
Eigen::VectorXd mlp_loss_gradient(const MlpModel& model, const Eigen::MatrixXd& x,
                                  const Eigen::VectorXd& y);
Eigen::VectorXd mlp_get_parameters(const MlpModel& model);
void mlp_set_parameters(MlpModel& model, const Eigen::VectorXd& flat);

// Seeded initial network without any training (epochs are ignored).
MlpModel mlp_init(int input_dim, const MlpSpec& spec);

}  // namespace copyro
