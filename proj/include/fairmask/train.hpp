#pragma once

#include <cstdint>
#include <optional>

#include "fairmask/dataset.hpp"
#include "fairmask/score_model.hpp"

namespace fairmask {

/// Hyperparameters shared by all trainers. Identical config + identical
/// data yields bit-identical parameters.
struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 2000;
    double l2_penalty = 1e-3;
    std::optional<std::size_t> batch_size;  // unset = full batch (the default)
    std::uint64_t seed = 0;
    double convergence_tol = 1e-8;
    bool allow_single_label = false;  // opt into degenerate all-one-label training

    void validate() const;
};

struct MlpArchitecture {
    std::vector<std::size_t> hidden_layers = {8, 8, 8};
    Activation activation = Activation::relu;

    void validate() const;
};

// Regularized log-loss, full-batch gradient descent from zero init.
// score(x) = sigmoid(w.x + b). Throws on non-finite loss (message carries
// the epoch index) and on single-label data unless cfg.allow_single_label.
ScoreModel train_logistic(const Dataset& train, const TrainConfig& cfg);

// L2-regularized hinge loss via subgradient descent; the decision value is
// mapped through a sigmoid so the score lands in [0,1] with the sign at 0
// and the within-group ordering preserved.
ScoreModel train_linear_svm(const Dataset& train, const TrainConfig& cfg);

// Backpropagation on log-loss; single logistic output unit. Weight init is
// symmetric uniform scaled by 1/sqrt(fan_in), seeded from cfg.seed.
ScoreModel train_mlp(const Dataset& train, const MlpArchitecture& arch, const TrainConfig& cfg);

ScoreModel train_family(const Dataset& train, ModelFamily family, const TrainConfig& cfg,
                        const MlpArchitecture& arch = {});

// Objective evaluators matching what the trainers minimize (mean data loss
// plus 0.5 * l2 * |w|^2, intercept and biases unpenalized).
double logistic_objective(const std::vector<double>& w, double b, const Dataset& d,
                          double l2_penalty);
double hinge_objective(const std::vector<double>& w, double b, const Dataset& d,
                       double l2_penalty);
double mlp_objective(const MlpParams& p, const Dataset& d, double l2_penalty);

// Analytic gradient of mlp_objective, flattened layer by layer
// (weights then biases per layer). Exposed for gradient verification.
std::vector<double> mlp_gradient(const MlpParams& p, const Dataset& d, double l2_penalty);
std::vector<double> flatten_mlp(const MlpParams& p);
void unflatten_mlp(MlpParams& p, const std::vector<double>& flat);

}  // namespace fairmask
