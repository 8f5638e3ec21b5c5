#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "graphsphere/errors.hpp"
#include "graphsphere/eval.hpp"
#include "graphsphere/graph.hpp"
#include "graphsphere/matrix.hpp"
#include "graphsphere/model.hpp"
#include "graphsphere/objective.hpp"

namespace graphsphere {

template <class Real>
struct TrainConfig {
    Real lambda = Real(0);
    std::vector<int> layer_dims;  // [D, ..., K]; default_layer_dims(D) if empty
    Activation final_activation = Activation::identity;
    Real learning_rate = Real(0.001);
    int max_epochs = 500;
    int patience = 50;  // epochs without validation improvement before stopping
    std::uint64_t seed = 0;
    std::string precision{precision_name<Real>()};
    Real l2_weight = Real(0);
    Mode mode = Mode::an;
    std::size_t auc_max_pairs = 10'000'000;
};

/// Three layers, 32 hidden units, K = 32.
inline std::vector<int> default_layer_dims(int input_dim) {
    return {input_dim, 32, 32, 32};
}

template <class Real>
struct AdamState {
    std::vector<Matrix<Real>> m;
    std::vector<Matrix<Real>> v;
    long long t = 0;
    Real beta1 = Real(0.9);
    Real beta2 = Real(0.999);
    Real eps = Real(1e-8);
};

template <class Real>
AdamState<Real> make_adam_state(const GcnModel<Real>& model) {
    AdamState<Real> state;
    for (const auto& w : model.weights) {
        state.m.push_back(Matrix<Real>::Zero(w.rows(), w.cols()));
        state.v.push_back(Matrix<Real>::Zero(w.rows(), w.cols()));
    }
    return state;
}

/// One bias-corrected Adam update, in place.
template <class Real>
void adam_step(std::vector<Matrix<Real>>& weights, const std::vector<Matrix<Real>>& grads,
               AdamState<Real>& state, Real learning_rate) {
    if (weights.size() != grads.size() || weights.size() != state.m.size()) {
        throw DataError("adam_step: parameter/gradient/state size mismatch");
    }
    state.t += 1;
    const Real bc1 = Real(1) - static_cast<Real>(std::pow(state.beta1, state.t));
    const Real bc2 = Real(1) - static_cast<Real>(std::pow(state.beta2, state.t));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (grads[i].rows() != weights[i].rows() || grads[i].cols() != weights[i].cols()) {
            throw DataError("adam_step: gradient shape mismatch at parameter " +
                            std::to_string(i));
        }
        auto& m = state.m[i];
        auto& v = state.v[i];
        m = state.beta1 * m + (Real(1) - state.beta1) * grads[i];
        v = state.beta2 * v + (Real(1) - state.beta2) * grads[i].cwiseProduct(grads[i]);
        weights[i].array() -=
            learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.eps);
    }
}

template <class Real>
struct EpochRecord {
    int epoch = 0;
    Real total = Real(0);
    Real compactness = Real(0);
    Real auc_reg = Real(0);
    Real validation_criterion = Real(0);
    double elapsed_s = 0.0;  // wall clock; kept out of the serialized metrics stream
};

template <class Real>
struct TrainHistory {
    std::vector<EpochRecord<Real>> epochs;
    int best_epoch = -1;
    std::string stop_reason;
};

template <class Real>
struct TrainResult {
    GcnModel<Real> model;
    Center<Real> center;
    TrainHistory<Real> history;
};

/// Config-only validation. Returns the checked config with patience clamped
/// to max_epochs.
template <class Real>
TrainConfig<Real> validate_config(const TrainConfig<Real>& cfg) {
    if (cfg.mode == Mode::n && cfg.lambda != Real(0)) {
        throw ConfigError("validate_config: mode N requires lambda = 0");
    }
    if (cfg.lambda < Real(0)) throw ConfigError("validate_config: lambda must be >= 0");
    if (!(cfg.learning_rate > Real(0))) {
        throw ConfigError("validate_config: learning rate must be > 0");
    }
    if (cfg.max_epochs < 0) throw ConfigError("validate_config: max_epochs must be >= 0");
    if (cfg.patience < 0) throw ConfigError("validate_config: patience must be >= 0");
    if (cfg.l2_weight < Real(0)) throw ConfigError("validate_config: l2_weight must be >= 0");
    if (cfg.precision != precision_name<Real>()) {
        throw ConfigError("validate_config: config precision '" + cfg.precision +
                          "' does not match the requested arithmetic '" +
                          std::string(precision_name<Real>()) + "'");
    }
    TrainConfig<Real> checked = cfg;
    checked.patience = std::min(cfg.patience, cfg.max_epochs);
    return checked;
}

/// Config + split validation, as used by train().
template <class Real>
TrainConfig<Real> validate_config(const TrainConfig<Real>& cfg, const LabelSplit& split,
                                  int n_nodes) {
    TrainConfig<Real> checked = validate_config(cfg);
    validate_split(split, n_nodes, cfg.mode == Mode::an);
    if (split.normal_train.empty()) {
        throw ConfigError("validate_config: empty labeled-normal set");
    }
    if (cfg.mode == Mode::an && split.anomalous_train.empty()) {
        throw ConfigError("validate_config: mode AN requires a non-empty anomalous set");
    }
    if (cfg.lambda > Real(0) && split.anomalous_train.empty()) {
        throw ConfigError("validate_config: lambda > 0 requires a non-empty anomalous set");
    }
    return checked;
}

/// Full-batch training of the combined objective with Adam and early
/// stopping. The center is set once from the initial forward pass and frozen;
/// the returned weights are the best-validation-epoch weights. Fully
/// deterministic given (seed, config, data); wall-clock only appears in the
/// history records.
template <class Real>
TrainResult<Real> train(const AttributedGraph<Real>& graph, const LabelSplit& split_in,
                        const TrainConfig<Real>& cfg_in) {
    // Mode N never reads anomalous labels: drop them before anything else
    // looks at the split, so arbitrary content there cannot change a run.
    LabelSplit split = split_in;
    if (cfg_in.mode == Mode::n) split.anomalous_train.clear();

    const TrainConfig<Real> cfg = validate_config(cfg_in, split, graph.n_nodes);
    if (split.validation.empty()) throw ConfigError("train: empty validation set");
    if (split.truth.empty()) throw ConfigError("train: split carries no ground truth");
    if (cfg.mode == Mode::an) {
        bool has_anom = false, has_norm = false;
        for (int id : split.validation) {
            (split.truth[static_cast<std::size_t>(id)] ? has_anom : has_norm) = true;
        }
        if (!has_anom || !has_norm) {
            throw ConfigError("train: mode AN needs validation nodes of both classes");
        }
    }

    const NormalizedAdjacency<Real> s = normalized_adjacency(graph);
    const Matrix<Real> x = effective_attributes(graph);
    std::vector<int> dims = cfg.layer_dims.empty()
                                ? default_layer_dims(static_cast<int>(x.cols()))
                                : cfg.layer_dims;
    if (dims.front() != static_cast<int>(x.cols())) {
        throw ConfigError("train: layer_dims[0] = " + std::to_string(dims.front()) +
                          " does not match the attribute dimension " +
                          std::to_string(x.cols()));
    }

    GcnModel<Real> model =
        init_model<Real>(dims, substream_seed(cfg.seed, "init"), cfg.final_activation);
    const Center<Real> center = init_center(model, s, x, split.normal_train);
    const AucPairPolicy pair_policy{cfg.auc_max_pairs, substream_seed(cfg.seed, "auc-pairs")};

    AdamState<Real> adam = make_adam_state(model);
    TrainHistory<Real> history;
    history.stop_reason = "max_epochs";

    std::vector<Matrix<Real>> best_weights = model.weights;
    const bool maximize = cfg.mode == Mode::an;
    Real best_criterion = maximize ? -std::numeric_limits<Real>::infinity()
                                   : std::numeric_limits<Real>::infinity();
    int epochs_since_best = 0;

    const auto t0 = std::chrono::steady_clock::now();
    ForwardCache<Real> cache;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        cache = forward(model, s, x);
        const Matrix<Real>& h = cache.embeddings();
        const Vector<Real> scores = anomaly_scores(h, center);

        ObjectiveValue<Real> value = objective(h, center, split.anomalous_train,
                                               split.normal_train, cfg.lambda, pair_policy);
        Real total = value.total;
        if (cfg.l2_weight > Real(0)) {
            Real weight_norm = Real(0);
            for (const auto& w : model.weights) weight_norm += w.squaredNorm();
            total += cfg.l2_weight * weight_norm;
        }
        if (!std::isfinite(static_cast<double>(total))) {
            throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                               " (compactness=" + std::to_string(value.compactness) +
                               ", auc_reg=" + std::to_string(value.auc_reg) + ")");
        }

        Real criterion;
        if (cfg.mode == Mode::an) {
            std::vector<Real> vs;
            std::vector<std::uint8_t> vl;
            vs.reserve(split.validation.size());
            vl.reserve(split.validation.size());
            for (int id : split.validation) {
                vs.push_back(scores[id]);
                vl.push_back(split.truth[static_cast<std::size_t>(id)]);
            }
            criterion = auc<Real>(vs, vl);
        } else {
            Real sum = Real(0);
            std::size_t count = 0;
            for (int id : split.validation) {
                if (!split.truth[static_cast<std::size_t>(id)]) {
                    sum += scores[id];
                    ++count;
                }
            }
            if (count == 0) throw ConfigError("train: no normal nodes in the validation set");
            criterion = sum / static_cast<Real>(count);
        }

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        history.epochs.push_back(
            {epoch, total, value.compactness, value.auc_reg, criterion, elapsed});

        const bool improved = maximize ? criterion > best_criterion : criterion < best_criterion;
        if (improved) {
            best_criterion = criterion;
            best_weights = model.weights;
            history.best_epoch = epoch;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
            if (epochs_since_best >= cfg.patience && cfg.patience > 0) {
                history.stop_reason = "early_stopping";
                break;
            }
        }

        Matrix<Real> loss_grad = objective_grad_embeddings(
            h, center, split.anomalous_train, split.normal_train, cfg.lambda, pair_policy);
        std::vector<Matrix<Real>> grads = backward(model, cache, loss_grad, s);
        if (cfg.l2_weight > Real(0)) {
            for (std::size_t i = 0; i < grads.size(); ++i) {
                grads[i] += Real(2) * cfg.l2_weight * model.weights[i];
            }
        }
        adam_step(model.weights, grads, adam, cfg.learning_rate);
    }

    if (history.best_epoch >= 0) model.weights = std::move(best_weights);
    return TrainResult<Real>{std::move(model), center, std::move(history)};
}

}  // namespace graphsphere
