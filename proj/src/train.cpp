#include "fairmask/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fairmask/rng.hpp"

namespace fairmask {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
    if (epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");
    if (l2_penalty < 0.0) throw std::invalid_argument("train: l2_penalty must be >= 0");
    if (batch_size && *batch_size == 0)
        throw std::invalid_argument("train: batch_size must be >= 1");
    if (!(convergence_tol > 0.0))
        throw std::invalid_argument("train: convergence_tol must be > 0");
}

void MlpArchitecture::validate() const {
    if (hidden_layers.empty())
        throw std::invalid_argument("mlp: at least one hidden layer is required");
    for (std::size_t h : hidden_layers)
        if (h == 0) throw std::invalid_argument("mlp: hidden layer width must be >= 1");
}

namespace {

void check_labels(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    const bool any_pos = std::any_of(d.labels.begin(), d.labels.end(), [](int y) { return y == 1; });
    const bool any_neg = std::any_of(d.labels.begin(), d.labels.end(), [](int y) { return y == 0; });
    if ((!any_pos || !any_neg) && !cfg.allow_single_label)
        throw std::invalid_argument(
            "train: all labels are identical; set allow_single_label to fit anyway");
}

// Epoch schedule shared by the linear trainers: full batch by default,
// seeded shuffled mini-batches when batch_size is set.
struct BatchPlan {
    std::vector<std::size_t> order;
    std::size_t batch = 0;
    bool full = true;

    BatchPlan(std::size_t n, const TrainConfig& cfg) {
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        full = !cfg.batch_size || *cfg.batch_size >= n;
        batch = full ? n : *cfg.batch_size;
    }
    void reshuffle(Rng& rng) {
        if (full) return;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.next_below(i)]);
    }
};

}  // namespace

double logistic_objective(const std::vector<double>& w, double b, const Dataset& d,
                          double l2_penalty) {
    double loss = 0.0;
    for (std::size_t r = 0; r < d.n_rows; ++r) {
        double z = b;
        auto x = d.row(r);
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
        // -log sigma(z) stably for either label
        const double y = d.labels[r];
        const double m = z > 0.0 ? z : 0.0;
        loss += m - y * z + std::log(std::exp(-m) + std::exp(z - m));
    }
    loss /= static_cast<double>(d.n_rows);
    double reg = 0.0;
    for (double wi : w) reg += wi * wi;
    return loss + 0.5 * l2_penalty * reg;
}

double hinge_objective(const std::vector<double>& w, double b, const Dataset& d,
                       double l2_penalty) {
    double loss = 0.0;
    for (std::size_t r = 0; r < d.n_rows; ++r) {
        double z = b;
        auto x = d.row(r);
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
        const double ypm = d.labels[r] == 1 ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - ypm * z);
    }
    loss /= static_cast<double>(d.n_rows);
    double reg = 0.0;
    for (double wi : w) reg += wi * wi;
    return loss + 0.5 * l2_penalty * reg;
}

namespace {

// Shared descent loop for the two linear objectives. grad_fn accumulates the
// per-sample contribution to (grad_w, grad_b) given the decision value z.
template <typename GradFn, typename LossFn>
LinearParams linear_descent(const Dataset& d, const TrainConfig& cfg, GradFn per_sample_grad,
                            LossFn loss_fn, const char* what) {
    const std::size_t n = d.n_rows, p = d.n_cols;
    LinearParams params;
    params.weights.assign(p, 0.0);
    params.intercept = 0.0;

    Rng rng(cfg.seed);
    BatchPlan plan(n, cfg);
    std::vector<double> grad_w(p);
    double prev_loss = loss_fn(params.weights, params.intercept, d, cfg.l2_penalty);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        plan.reshuffle(rng);
        for (std::size_t start = 0; start < n; start += plan.batch) {
            const std::size_t end = std::min(n, start + plan.batch);
            std::fill(grad_w.begin(), grad_w.end(), 0.0);
            double grad_b = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t r = plan.order[k];
                auto x = d.row(r);
                double z = params.intercept;
                for (std::size_t j = 0; j < p; ++j) z += params.weights[j] * x[j];
                per_sample_grad(z, d.labels[r], x, grad_w, grad_b);
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (std::size_t j = 0; j < p; ++j) {
                const double g = grad_w[j] * inv + cfg.l2_penalty * params.weights[j];
                params.weights[j] -= cfg.learning_rate * g;
            }
            params.intercept -= cfg.learning_rate * grad_b * inv;
        }
        const double loss = loss_fn(params.weights, params.intercept, d, cfg.l2_penalty);
        if (!std::isfinite(loss))
            throw std::runtime_error(std::string(what) + ": non-finite loss at epoch " +
                                     std::to_string(epoch) +
                                     " (learning rate likely too high)");
        if (std::abs(prev_loss - loss) < cfg.convergence_tol) break;
        prev_loss = loss;
    }
    return params;
}

}  // namespace

ScoreModel train_logistic(const Dataset& train, const TrainConfig& cfg) {
    cfg.validate();
    check_labels(train, cfg);
    auto grad = [](double z, int y, std::span<const double> x, std::vector<double>& gw,
                   double& gb) {
        const double e = sigmoid(z) - static_cast<double>(y);
        for (std::size_t j = 0; j < x.size(); ++j) gw[j] += e * x[j];
        gb += e;
    };
    ScoreModel m;
    m.family = ModelFamily::logistic;
    m.params = linear_descent(train, cfg, grad, logistic_objective, "train_logistic");
    return m;
}

ScoreModel train_linear_svm(const Dataset& train, const TrainConfig& cfg) {
    cfg.validate();
    check_labels(train, cfg);
    auto grad = [](double z, int y, std::span<const double> x, std::vector<double>& gw,
                   double& gb) {
        const double ypm = y == 1 ? 1.0 : -1.0;
        if (ypm * z < 1.0) {  // hinge active
            for (std::size_t j = 0; j < x.size(); ++j) gw[j] -= ypm * x[j];
            gb -= ypm;
        }
    };
    ScoreModel m;
    m.family = ModelFamily::linear_svm;
    m.params = linear_descent(train, cfg, grad, hinge_objective, "train_linear_svm");
    return m;
}

std::vector<double> flatten_mlp(const MlpParams& p) {
    std::vector<double> flat;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        flat.insert(flat.end(), p.layer_weights[l].begin(), p.layer_weights[l].end());
        flat.insert(flat.end(), p.layer_biases[l].begin(), p.layer_biases[l].end());
    }
    return flat;
}

void unflatten_mlp(MlpParams& p, const std::vector<double>& flat) {
    std::size_t cursor = 0;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        for (auto& w : p.layer_weights[l]) w = flat[cursor++];
        for (auto& b : p.layer_biases[l]) b = flat[cursor++];
    }
    if (cursor != flat.size()) throw std::invalid_argument("mlp: flat parameter size mismatch");
}

namespace {

struct ForwardTrace {
    // activations[l] is the output of layer l (activations[0] = input)
    std::vector<std::vector<double>> activations;
    std::vector<std::vector<double>> pre_activations;
};

ForwardTrace mlp_forward_trace(const MlpParams& p, std::span<const double> x) {
    ForwardTrace t;
    t.activations.emplace_back(x.begin(), x.end());
    const std::size_t layers = p.widths.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = p.widths[l], out = p.widths[l + 1];
        std::vector<double> z(out), a(out);
        for (std::size_t o = 0; o < out; ++o) {
            double v = p.layer_biases[l][o];
            for (std::size_t i = 0; i < in; ++i)
                v += p.layer_weights[l][o * in + i] * t.activations[l][i];
            if (!std::isfinite(v))
                throw std::runtime_error("train_mlp: non-finite activation at layer " +
                                         std::to_string(l));
            z[o] = v;
            if (l + 1 == layers) a[o] = sigmoid(v);
            else if (p.activation == Activation::relu) a[o] = v > 0.0 ? v : 0.0;
            else a[o] = sigmoid(v);
        }
        t.pre_activations.push_back(std::move(z));
        t.activations.push_back(std::move(a));
    }
    return t;
}

// Accumulates d(mean log-loss)/d(params) over the given rows into grads
// shaped like the parameter tensors; returns the summed data loss.
double mlp_backprop(const MlpParams& p, const Dataset& d, const std::vector<std::size_t>& rows,
                    std::vector<std::vector<double>>& grad_w,
                    std::vector<std::vector<double>>& grad_b) {
    const std::size_t layers = p.widths.size() - 1;
    double total_loss = 0.0;
    for (std::size_t r : rows) {
        auto trace = mlp_forward_trace(p, d.row(r));
        const double y = d.labels[r];
        const double z_out = trace.pre_activations.back()[0];
        const double a_out = trace.activations.back()[0];
        const double m = z_out > 0.0 ? z_out : 0.0;
        total_loss += m - y * z_out + std::log(std::exp(-m) + std::exp(z_out - m));

        // delta at the logistic output simplifies to (a - y)
        std::vector<double> delta{a_out - y};
        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t in = p.widths[l], out = p.widths[l + 1];
            const auto& a_prev = trace.activations[l];
            for (std::size_t o = 0; o < out; ++o) {
                grad_b[l][o] += delta[o];
                for (std::size_t i = 0; i < in; ++i)
                    grad_w[l][o * in + i] += delta[o] * a_prev[i];
            }
            if (l == 0) break;
            std::vector<double> prev_delta(in, 0.0);
            for (std::size_t i = 0; i < in; ++i) {
                double s = 0.0;
                for (std::size_t o = 0; o < out; ++o)
                    s += p.layer_weights[l][o * in + i] * delta[o];
                const double z = trace.pre_activations[l - 1][i];
                if (p.activation == Activation::relu) {
                    prev_delta[i] = z > 0.0 ? s : 0.0;
                } else {
                    const double sg = sigmoid(z);
                    prev_delta[i] = s * sg * (1.0 - sg);
                }
            }
            delta = std::move(prev_delta);
        }
    }
    return total_loss;
}

MlpParams init_mlp(const MlpArchitecture& arch, std::size_t input_width, std::uint64_t seed) {
    MlpParams p;
    p.activation = arch.activation;
    p.widths.push_back(input_width);
    for (std::size_t h : arch.hidden_layers) p.widths.push_back(h);
    p.widths.push_back(1);
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        const std::size_t in = p.widths[l], out = p.widths[l + 1];
        const double scale = 1.0 / std::sqrt(static_cast<double>(in));
        std::vector<double> w(in * out), b(out, 0.0);
        for (auto& v : w) v = rng.next_uniform(-scale, scale);
        p.layer_weights.push_back(std::move(w));
        p.layer_biases.push_back(std::move(b));
    }
    return p;
}

}  // namespace

double mlp_objective(const MlpParams& p, const Dataset& d, double l2_penalty) {
    std::vector<std::vector<double>> gw, gb;
    gw.reserve(p.widths.size() - 1);
    gb.reserve(p.widths.size() - 1);
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        gw.emplace_back(p.layer_weights[l].size(), 0.0);
        gb.emplace_back(p.layer_biases[l].size(), 0.0);
    }
    std::vector<std::size_t> rows(d.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    double loss = mlp_backprop(p, d, rows, gw, gb) / static_cast<double>(d.n_rows);
    double reg = 0.0;
    for (const auto& w : p.layer_weights)
        for (double v : w) reg += v * v;
    return loss + 0.5 * l2_penalty * reg;
}

std::vector<double> mlp_gradient(const MlpParams& p, const Dataset& d, double l2_penalty) {
    std::vector<std::vector<double>> gw, gb;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        gw.emplace_back(p.layer_weights[l].size(), 0.0);
        gb.emplace_back(p.layer_biases[l].size(), 0.0);
    }
    std::vector<std::size_t> rows(d.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    mlp_backprop(p, d, rows, gw, gb);
    const double inv = 1.0 / static_cast<double>(d.n_rows);
    std::vector<double> flat;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        for (std::size_t k = 0; k < gw[l].size(); ++k)
            flat.push_back(gw[l][k] * inv + l2_penalty * p.layer_weights[l][k]);
        for (double v : gb[l]) flat.push_back(v * inv);
    }
    return flat;
}

ScoreModel train_mlp(const Dataset& train, const MlpArchitecture& arch, const TrainConfig& cfg) {
    cfg.validate();
    arch.validate();
    train.validate();

    MlpParams p = init_mlp(arch, train.n_cols, cfg.seed);
    Rng rng(cfg.seed ^ 0x5eedULL);
    BatchPlan plan(train.n_rows, cfg);

    std::vector<std::vector<double>> gw, gb;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        gw.emplace_back(p.layer_weights[l].size());
        gb.emplace_back(p.layer_biases[l].size());
    }

    std::vector<double> epoch_losses;
    epoch_losses.reserve(cfg.epochs);
    double prev_loss = mlp_objective(p, train, cfg.l2_penalty);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        plan.reshuffle(rng);
        for (std::size_t start = 0; start < train.n_rows; start += plan.batch) {
            const std::size_t end = std::min(train.n_rows, start + plan.batch);
            for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
            for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
            std::vector<std::size_t> rows(plan.order.begin() + start, plan.order.begin() + end);
            mlp_backprop(p, train, rows, gw, gb);
            const double inv = 1.0 / static_cast<double>(end - start);
            for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
                for (std::size_t k = 0; k < gw[l].size(); ++k)
                    p.layer_weights[l][k] -= cfg.learning_rate *
                                             (gw[l][k] * inv + cfg.l2_penalty * p.layer_weights[l][k]);
                for (std::size_t k = 0; k < gb[l].size(); ++k)
                    p.layer_biases[l][k] -= cfg.learning_rate * gb[l][k] * inv;
            }
        }
        const double loss = mlp_objective(p, train, cfg.l2_penalty);
        if (!std::isfinite(loss))
            throw std::runtime_error("train_mlp: non-finite loss at epoch " +
                                     std::to_string(epoch));
        epoch_losses.push_back(loss);
        if (std::abs(prev_loss - loss) < cfg.convergence_tol) break;
        prev_loss = loss;
    }

    ScoreModel m;
    m.family = ModelFamily::mlp;
    // flag non-monotone trailing loss (tolerance 1e-6 over the final 10%)
    const std::size_t ran = epoch_losses.size();
    const std::size_t tail = std::max<std::size_t>(2, ran / 10);
    for (std::size_t i = ran > tail ? ran - tail : 1; i < ran; ++i) {
        if (epoch_losses[i] > epoch_losses[i - 1] + 1e-6) {
            m.warnings.push_back("training loss increased near epoch " + std::to_string(i) +
                                 "; consider lowering the learning rate");
            break;
        }
    }
    m.params = std::move(p);
    return m;
}

ScoreModel train_family(const Dataset& train, ModelFamily family, const TrainConfig& cfg,
                        const MlpArchitecture& arch) {
    switch (family) {
        case ModelFamily::logistic: return train_logistic(train, cfg);
        case ModelFamily::linear_svm: return train_linear_svm(train, cfg);
        case ModelFamily::mlp: return train_mlp(train, arch, cfg);
        default: throw std::invalid_argument("train: cannot train family 'constant'");
    }
}

}  // namespace fairmask
