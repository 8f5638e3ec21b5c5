#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "graphsphere/errors.hpp"
#include "graphsphere/matrix.hpp"
#include "graphsphere/model.hpp"
#include "graphsphere/rng.hpp"

namespace graphsphere {

// Minimum center norm. The center must not be the zero vector (hypersphere
// collapse); 1e-3 sits far above double noise and far below the typical
// embedding scale after Glorot initialization on [0,1] features.
inline constexpr double kCenterEps = 1e-3;

/// Fixed hypersphere center. Never trained; set once by init_center.
template <class Real>
struct Center {
    Vector<Real> c;
    bool frozen = true;
    bool guard_engaged = false;

    int dim() const { return static_cast<int>(c.size()); }
};

/// Overflow-safe sigmoid: exact 0/1 at large |x| instead of overflow.
template <class Real>
Real stable_sigmoid(Real x) {
    if (x >= Real(0)) {
        return Real(1) / (Real(1) + std::exp(-x));
    }
    const Real e = std::exp(x);
    return e / (Real(1) + e);
}

/// a(v_n) = ||h_n - c||^2 for every node.
template <class Real>
Vector<Real> anomaly_scores(const Matrix<Real>& h, const Center<Real>& center) {
    if (h.cols() != center.c.size()) {
        throw DataError("anomaly_scores: embedding width " + std::to_string(h.cols()) +
                        " does not match center dimension " + std::to_string(center.c.size()));
    }
    return (h.rowwise() - center.c.transpose()).rowwise().squaredNorm();
}

/// Mean anomaly score over the labeled-normal set.
template <class Real>
Real compactness_loss(const Vector<Real>& scores, const std::vector<int>& normal_ids) {
    if (normal_ids.empty()) throw DataError("compactness_loss: empty normal set");
    Real sum = Real(0);
    for (int id : normal_ids) sum += scores[id];
    return sum / static_cast<Real>(normal_ids.size());
}

// Pair enumeration policy for the AUC term. The full anomalous x normal
// product is used up to max_pairs; past that, max_pairs pairs are drawn
// uniformly (with replacement) from a fixed-seed stream. Never active at the
// scales the tests run.
struct AucPairPolicy {
    std::size_t max_pairs = 10'000'000;
    std::uint64_t seed = 0;
};

namespace detail {

// Applies fn(i, j) over pair indices into (anomalous, normal), anomalous-major
// order, and returns the pair count used for normalization.
template <class Fn>
std::size_t for_each_auc_pair(std::size_t n_anom, std::size_t n_norm,
                              const AucPairPolicy& policy, Fn&& fn) {
    const std::size_t full = n_anom * n_norm;
    if (full <= policy.max_pairs) {
        for (std::size_t i = 0; i < n_anom; ++i) {
            for (std::size_t j = 0; j < n_norm; ++j) fn(i, j);
        }
        return full;
    }
    Rng rng(substream_seed(policy.seed, "auc-pairs"));
    for (std::size_t k = 0; k < policy.max_pairs; ++k) {
        const std::size_t i = static_cast<std::size_t>(rng.below(n_anom));
        const std::size_t j = static_cast<std::size_t>(rng.below(n_norm));
        fn(i, j);
    }
    return policy.max_pairs;
}

}  // namespace detail

/// Differentiable AUC surrogate: mean over anomalous x normal pairs of
/// sigmoid(a(anomalous) - a(normal)).
template <class Real>
Real auc_regularizer(const Vector<Real>& scores, const std::vector<int>& anomalous_ids,
                     const std::vector<int>& normal_ids, const AucPairPolicy& policy = {}) {
    if (anomalous_ids.empty()) {
        throw DataError("auc_regularizer: empty anomalous set (use the lambda = 0 path)");
    }
    if (normal_ids.empty()) throw DataError("auc_regularizer: empty normal set");
    Real sum = Real(0);
    const std::size_t count = detail::for_each_auc_pair(
        anomalous_ids.size(), normal_ids.size(), policy, [&](std::size_t i, std::size_t j) {
            sum += stable_sigmoid(scores[anomalous_ids[i]] - scores[normal_ids[j]]);
        });
    return sum / static_cast<Real>(count);
}

template <class Real>
struct ObjectiveValue {
    Real total = Real(0);        // compactness - lambda * auc_reg
    Real compactness = Real(0);  // mean normal score
    Real auc_reg = Real(0);      // 0 when lambda == 0 (the anomalous set is never read)
    Real lambda = Real(0);
};

/// Combined objective L = L_nor - lambda * R_AUC. The lambda = 0 path never
/// touches the anomalous set.
template <class Real>
ObjectiveValue<Real> objective(const Matrix<Real>& h, const Center<Real>& center,
                               const std::vector<int>& anomalous_ids,
                               const std::vector<int>& normal_ids, Real lambda,
                               const AucPairPolicy& policy = {}) {
    if (lambda < Real(0)) throw ConfigError("objective: lambda must be >= 0");
    const Vector<Real> scores = anomaly_scores(h, center);
    ObjectiveValue<Real> value;
    value.lambda = lambda;
    value.compactness = compactness_loss(scores, normal_ids);
    if (lambda > Real(0)) {
        if (anomalous_ids.empty()) {
            throw ConfigError("objective: lambda > 0 requires a non-empty anomalous set");
        }
        value.auc_reg = auc_regularizer(scores, anomalous_ids, normal_ids, policy);
    }
    value.total = value.compactness - lambda * value.auc_reg;
    return value;
}

/// dL/dH. Unlabeled rows are zero; labeled rows combine the compactness pull
/// with the pairwise AUC push/pull, each pair weighted by
/// sigmoid'(delta) = f(delta) (1 - f(delta)).
template <class Real>
Matrix<Real> objective_grad_embeddings(const Matrix<Real>& h, const Center<Real>& center,
                                       const std::vector<int>& anomalous_ids,
                                       const std::vector<int>& normal_ids, Real lambda,
                                       const AucPairPolicy& policy = {}) {
    if (lambda < Real(0)) throw ConfigError("objective: lambda must be >= 0");
    if (normal_ids.empty()) throw DataError("objective_grad_embeddings: empty normal set");
    const Vector<Real> scores = anomaly_scores(h, center);

    Matrix<Real> grad = Matrix<Real>::Zero(h.rows(), h.cols());
    const Real inv_norm = Real(2) / static_cast<Real>(normal_ids.size());

    if (lambda > Real(0)) {
        if (anomalous_ids.empty()) {
            throw ConfigError("objective: lambda > 0 requires a non-empty anomalous set");
        }
        // per-node sums of sigmoid'(delta) over the pair stream
        std::vector<Real> coef_anom(anomalous_ids.size(), Real(0));
        std::vector<Real> coef_norm(normal_ids.size(), Real(0));
        const std::size_t count = detail::for_each_auc_pair(
            anomalous_ids.size(), normal_ids.size(), policy,
            [&](std::size_t i, std::size_t j) {
                const Real f = stable_sigmoid(scores[anomalous_ids[i]] - scores[normal_ids[j]]);
                const Real fprime = f * (Real(1) - f);
                coef_anom[i] += fprime;
                coef_norm[j] += fprime;
            });
        const Real scale = Real(2) * lambda / static_cast<Real>(count);
        for (std::size_t i = 0; i < anomalous_ids.size(); ++i) {
            const int id = anomalous_ids[i];
            grad.row(id) = -scale * coef_anom[i] * (h.row(id) - center.c.transpose());
        }
        for (std::size_t j = 0; j < normal_ids.size(); ++j) {
            const int id = normal_ids[j];
            grad.row(id) = (inv_norm + scale * coef_norm[j]) * (h.row(id) - center.c.transpose());
        }
    } else {
        for (int id : normal_ids) {
            grad.row(id) = inv_norm * (h.row(id) - center.c.transpose());
        }
    }
    return grad;
}

/// Center = mean embedding of the labeled-normal nodes after an initial
/// forward pass. If the mean lands inside the collapse-guard ball, every
/// coordinate below the threshold is pushed to +/- eps, sign preserving
/// (zero counts as positive).
template <class Real>
Center<Real> init_center(const GcnModel<Real>& model, const NormalizedAdjacency<Real>& s,
                         const Matrix<Real>& x, const std::vector<int>& normal_ids) {
    if (normal_ids.empty()) throw DataError("init_center: empty normal set");
    const ForwardCache<Real> cache = forward(model, s, x);
    const Matrix<Real>& h = cache.embeddings();

    Center<Real> center;
    center.c = Vector<Real>::Zero(h.cols());
    for (int id : normal_ids) center.c += h.row(id).transpose();
    center.c /= static_cast<Real>(normal_ids.size());

    const Real eps = static_cast<Real>(kCenterEps);
    if (center.c.norm() <= eps) {
        for (Eigen::Index k = 0; k < center.c.size(); ++k) {
            if (std::abs(center.c[k]) < eps) {
                center.c[k] = center.c[k] >= Real(0) ? eps : -eps;
            }
        }
        center.guard_engaged = true;
    }
    return center;
}

}  // namespace graphsphere
