#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "graphsphere/errors.hpp"
#include "graphsphere/eval.hpp"
#include "graphsphere/graph.hpp"
#include "graphsphere/rng.hpp"

namespace graphsphere {

struct BinarizeResult {
    GroundTruth truth;
    int anomalous_class = -1;
    std::size_t anomaly_count = 0;
};

/// Smallest class becomes the anomalous one (ties: smallest class id), the
/// rest are normal.
inline BinarizeResult binarize_labels(const std::vector<int>& labels) {
    std::map<int, std::size_t> counts;
    for (int c : labels) counts[c]++;
    if (counts.size() < 2) {
        throw DataError("binarize_labels: need at least two distinct classes");
    }
    int smallest = -1;
    std::size_t smallest_count = 0;
    for (const auto& [cls, count] : counts) {  // ascending class id, so ties keep the smaller id
        if (smallest < 0 || count < smallest_count) {
            smallest = cls;
            smallest_count = count;
        }
    }
    BinarizeResult result;
    result.anomalous_class = smallest;
    result.anomaly_count = smallest_count;
    result.truth.reserve(labels.size());
    for (int c : labels) result.truth.push_back(c == smallest ? 1 : 0);
    return result;
}

struct SplitSpec {
    double labeled_ratio = 0.10;
    double validation_ratio = 0.10;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    bool require_anomalous = false;  // mode-AN runs need a non-empty anomalous set
    int max_retries = 100;
};

/// Uniform (unstratified) labeled sampling: floor(ratio*N) labeled nodes,
/// partitioned into anomalous/normal by ground truth, floor(0.10*N)
/// validation, remainder test. Deterministic per (seed, replicate). Redraws
/// (up to max_retries) when the labeled-normal set comes up empty;
/// require_anomalous additionally demands a non-empty labeled-anomalous set
/// and a two-class validation set, the preconditions of an AN-mode run.
inline LabelSplit make_split(const GroundTruth& truth, const SplitSpec& spec) {
    const int n = static_cast<int>(truth.size());
    if (n < 2) throw DataError("make_split: need at least two nodes");
    if (spec.labeled_ratio <= 0.0 || spec.validation_ratio < 0.0 ||
        spec.labeled_ratio + spec.validation_ratio >= 1.0) {
        throw ConfigError("make_split: labeled_ratio + validation_ratio must be < 1");
    }
    const int n_labeled = static_cast<int>(spec.labeled_ratio * n);
    const int n_validation = static_cast<int>(spec.validation_ratio * n);
    if (n_labeled < 1) throw ConfigError("make_split: labeled_ratio selects zero nodes");

    Rng rng(substream_seed(spec.seed, "split", spec.replicate));
    std::vector<int> ids(static_cast<std::size_t>(n));

    for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
        std::iota(ids.begin(), ids.end(), 0);
        const int head = n_labeled + n_validation;
        for (int i = 0; i < head; ++i) {  // partial Fisher-Yates
            const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
        }

        LabelSplit split;
        for (int i = 0; i < n_labeled; ++i) {
            const int id = ids[static_cast<std::size_t>(i)];
            (truth[static_cast<std::size_t>(id)] ? split.anomalous_train : split.normal_train)
                .push_back(id);
        }
        if (split.normal_train.empty()) continue;
        if (spec.require_anomalous) {
            if (split.anomalous_train.empty()) continue;
            // Mode AN scores validation by AUC, which needs both classes there.
            int val_anom = 0;
            for (int i = n_labeled; i < head; ++i) {
                val_anom += truth[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])];
            }
            if (val_anom == 0 || val_anom == n_validation) continue;
        }

        split.validation.assign(ids.begin() + n_labeled, ids.begin() + head);
        split.test.assign(ids.begin() + head, ids.end());
        std::sort(split.anomalous_train.begin(), split.anomalous_train.end());
        std::sort(split.normal_train.begin(), split.normal_train.end());
        std::sort(split.validation.begin(), split.validation.end());
        std::sort(split.test.begin(), split.test.end());
        split.truth = truth;
        return split;
    }
    throw DataError("make_split: no admissible labeled set after " +
                    std::to_string(spec.max_retries) + " retries");
}

struct SynthConfig {
    int n_nodes = 500;
    double anomaly_rate = 0.05;
    double p_in = 0.05;    // within-block edge probability
    double p_out = 0.005;  // cross-block edge probability
    int dim = 16;
    double mu_shift = 4.0;  // attribute mean shift of the anomalous block
    std::uint64_t seed = 0;
};

template <class Real>
struct SynthResult {
    AttributedGraph<Real> graph;
    GroundTruth truth;
};

/// Two-block stochastic block model fixture: a normal block and a planted
/// anomaly block (ids at the tail), unit-variance spherical attributes with
/// the anomalous mean shifted by mu_shift along a random direction, then
/// min-max rescaled per column.
template <class Real>
SynthResult<Real> generate_synthetic(const SynthConfig& cfg) {
    if (cfg.n_nodes < 2) throw ConfigError("generate_synthetic: need at least two nodes");
    if (!(cfg.anomaly_rate > 0.0 && cfg.anomaly_rate < 0.5)) {
        throw ConfigError("generate_synthetic: anomaly_rate must be in (0, 0.5)");
    }
    if (cfg.p_in < 0.0 || cfg.p_in > 1.0 || cfg.p_out < 0.0 || cfg.p_out > 1.0) {
        throw ConfigError("generate_synthetic: edge probabilities must be in [0, 1]");
    }
    if (cfg.dim < 1) throw ConfigError("generate_synthetic: dim must be >= 1");
    const int n_anom = static_cast<int>(cfg.anomaly_rate * cfg.n_nodes);
    const int n_norm = cfg.n_nodes - n_anom;
    if (n_anom < 1 || n_norm < 1) {
        throw ConfigError("generate_synthetic: a block would be empty at this size/rate");
    }

    Rng rng(substream_seed(cfg.seed, "synth"));

    // random unit shift direction
    std::vector<double> dir(static_cast<std::size_t>(cfg.dim));
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& d : dir) {
            d = rng.normal();
            norm += d * d;
        }
        norm = std::sqrt(norm);
    } while (norm == 0.0);

    GroundTruth truth(static_cast<std::size_t>(cfg.n_nodes), 0);
    for (int i = n_norm; i < cfg.n_nodes; ++i) truth[static_cast<std::size_t>(i)] = 1;

    Matrix<Real> attrs(cfg.n_nodes, cfg.dim);
    for (int i = 0; i < cfg.n_nodes; ++i) {
        const double shift = truth[static_cast<std::size_t>(i)] ? cfg.mu_shift : 0.0;
        for (int d = 0; d < cfg.dim; ++d) {
            attrs(i, d) = static_cast<Real>(rng.normal() +
                                            shift * dir[static_cast<std::size_t>(d)] / norm);
        }
    }

    std::vector<Edge<Real>> edges;
    for (int u = 0; u < cfg.n_nodes; ++u) {
        for (int v = u + 1; v < cfg.n_nodes; ++v) {
            const bool same = truth[static_cast<std::size_t>(u)] == truth[static_cast<std::size_t>(v)];
            const double p = same ? cfg.p_in : cfg.p_out;
            if (rng.uniform01() < p) edges.push_back({u, v, Real(1)});
        }
    }

    AttributedGraph<Real> graph =
        build_graph<Real>(cfg.n_nodes, std::move(edges), rescale_attributes<Real>(attrs));
    return SynthResult<Real>{std::move(graph), std::move(truth)};
}

}  // namespace graphsphere
