#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "graphsphere/errors.hpp"
#include "graphsphere/graph.hpp"
#include "graphsphere/matrix.hpp"
#include "graphsphere/rng.hpp"

namespace graphsphere {

// Hidden layers always use the rectifier. The final layer is configurable
// between identity and rectifier only: bounded activations are excluded as a
// hypersphere-collapse guard, together with the absence of bias terms.
enum class Activation : std::uint8_t { identity = 0, relu = 1 };

inline const char* activation_name(Activation a) {
    return a == Activation::identity ? "identity" : "relu";
}

inline Activation parse_activation(const std::string& s) {
    if (s == "identity") return Activation::identity;
    if (s == "relu") return Activation::relu;
    throw ConfigError("unknown final activation '" + s +
                      "' (bounded activations are rejected as a collapse guard; use "
                      "'identity' or 'relu')");
}

/// Bias-free multi-layer graph convolution: H^(l+1) = act(S H^(l) W^(l)).
template <class Real>
struct GcnModel {
    std::vector<int> layer_dims;           // [D, d_1, ..., K]
    std::vector<Matrix<Real>> weights;     // L matrices, layer_dims[l] x layer_dims[l+1]
    Activation final_activation = Activation::identity;

    int n_layers() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return layer_dims.front(); }
    int embedding_dim() const { return layer_dims.back(); }
};

/// Glorot-uniform initialization, bit-deterministic for a given seed:
/// entries uniform on [-b, b] with b = sqrt(6 / (fan_in + fan_out)).
template <class Real>
GcnModel<Real> init_model(const std::vector<int>& layer_dims, std::uint64_t seed,
                          Activation final_activation = Activation::identity) {
    if (layer_dims.size() < 2) throw ConfigError("init_model: need at least one layer");
    for (int d : layer_dims) {
        if (d < 1) throw ConfigError("init_model: all layer dims must be >= 1");
    }

    GcnModel<Real> model;
    model.layer_dims = layer_dims;
    model.final_activation = final_activation;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const int rows = layer_dims[l];
        const int cols = layer_dims[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
        Matrix<Real> w(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                w(r, c) = static_cast<Real>(rng.uniform(-bound, bound));
            }
        }
        model.weights.push_back(std::move(w));
    }
    return model;
}

/// Intermediates of one forward pass, consumed by backward exactly once.
/// post[0] is the input X; pre[l] / post[l+1] belong to layer l.
template <class Real>
struct ForwardCache {
    std::vector<Matrix<Real>> post;
    std::vector<Matrix<Real>> pre;
    bool consumed = false;

    const Matrix<Real>& embeddings() const { return post.back(); }
};

namespace detail {

// abort threshold for runaway activations; diagnosing is better than
// silently saturating to inf a few epochs later
inline constexpr double kActivationLimit = 1e12;

template <class Real>
void apply_activation(Matrix<Real>& m, Activation act) {
    if (act == Activation::relu) m = m.cwiseMax(Real(0));
}

}  // namespace detail

template <class Real>
ForwardCache<Real> forward(const GcnModel<Real>& model, const NormalizedAdjacency<Real>& s,
                           const Matrix<Real>& x) {
    if (x.cols() != model.input_dim()) {
        throw DataError("forward: input has " + std::to_string(x.cols()) +
                        " columns, model expects " + std::to_string(model.input_dim()));
    }
    if (x.rows() != s.n) throw DataError("forward: input rows do not match the operator");

    const int layers = model.n_layers();
    ForwardCache<Real> cache;
    cache.post.reserve(static_cast<std::size_t>(layers) + 1);
    cache.pre.reserve(static_cast<std::size_t>(layers));
    cache.post.push_back(x);

    for (int l = 0; l < layers; ++l) {
        // (S H) W and S (H W) agree exactly in exact arithmetic; the latter is
        // far cheaper for wide inputs and is the one fixed order used here
        Matrix<Real> z = cache.post.back() * model.weights[static_cast<std::size_t>(l)];
        Matrix<Real> pre = propagate(s, z);
        if (!pre.allFinite() ||
            pre.cwiseAbs().maxCoeff() > static_cast<Real>(detail::kActivationLimit)) {
            throw NumericError("forward: activation overflow at layer " + std::to_string(l));
        }
        Matrix<Real> post = pre;
        const Activation act = (l + 1 == layers) ? model.final_activation : Activation::relu;
        detail::apply_activation(post, act);
        cache.pre.push_back(std::move(pre));
        cache.post.push_back(std::move(post));
    }
    return cache;
}

/// Reverse-mode gradients of a scalar loss through the forward pass, given
/// dL/dH at the embeddings. Uses S^T = S.
template <class Real>
std::vector<Matrix<Real>> backward(const GcnModel<Real>& model, ForwardCache<Real>& cache,
                                   const Matrix<Real>& loss_grad_embeddings,
                                   const NormalizedAdjacency<Real>& s) {
    const int layers = model.n_layers();
    if (static_cast<int>(cache.pre.size()) != layers ||
        static_cast<int>(cache.post.size()) != layers + 1) {
        throw DataError("backward: cache does not match the model");
    }
    for (int l = 0; l < layers; ++l) {
        if (cache.post[static_cast<std::size_t>(l)].cols() != model.layer_dims[static_cast<std::size_t>(l)]) {
            throw DataError("backward: cache does not match the model");
        }
    }
    if (loss_grad_embeddings.rows() != s.n ||
        loss_grad_embeddings.cols() != model.embedding_dim()) {
        throw DataError("backward: gradient shape does not match the embeddings");
    }
    if (cache.consumed) throw DataError("backward: cache already consumed");
    cache.consumed = true;

    std::vector<Matrix<Real>> grads(static_cast<std::size_t>(layers));
    Matrix<Real> g = loss_grad_embeddings;
    for (int l = layers - 1; l >= 0; --l) {
        const Activation act = (l + 1 == layers) ? model.final_activation : Activation::relu;
        if (act == Activation::relu) {
            g = (cache.pre[static_cast<std::size_t>(l)].array() > Real(0))
                    .select(g, Matrix<Real>::Zero(g.rows(), g.cols()));
        }
        const Matrix<Real> u = propagate(s, g);
        grads[static_cast<std::size_t>(l)] =
            cache.post[static_cast<std::size_t>(l)].transpose() * u;
        if (l > 0) g = u * model.weights[static_cast<std::size_t>(l)].transpose();
    }
    return grads;
}

}  // namespace graphsphere
