#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "graphsphere/errors.hpp"
#include "graphsphere/graph.hpp"
#include "graphsphere/matrix.hpp"
#include "graphsphere/model.hpp"
#include "graphsphere/objective.hpp"

namespace graphsphere {

// Training modes: `an` uses anomalous + normal labels, `n` uses normal labels
// only (and forces lambda = 0).
enum class Mode : std::uint8_t { an = 0, n = 1 };

inline const char* mode_name(Mode m) { return m == Mode::an ? "an" : "n"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "an") return Mode::an;
    if (s == "n") return Mode::n;
    throw ConfigError("unknown mode '" + s + "' (expected 'an' or 'n')");
}

// node -> {anomalous=1, normal=0}
using GroundTruth = std::vector<std::uint8_t>;

/// Transductive label split. Training labels are the anomalous/normal id
/// lists; validation and test ids are scored against `truth`, which covers
/// all nodes.
struct LabelSplit {
    std::vector<int> anomalous_train;
    std::vector<int> normal_train;
    std::vector<int> validation;
    std::vector<int> test;
    GroundTruth truth;
};

/// Disjointness / range validation. `check_anomalous` is off for mode-N runs,
/// which never read the anomalous list.
inline void validate_split(const LabelSplit& split, int n_nodes, bool check_anomalous = true) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_nodes), 0);
    auto check = [&](const std::vector<int>& ids, const char* name) {
        for (int id : ids) {
            if (id < 0 || id >= n_nodes) {
                throw DataError(std::string("split: ") + name + " id " + std::to_string(id) +
                                " out of range [0," + std::to_string(n_nodes) + ")");
            }
            if (seen[static_cast<std::size_t>(id)]++) {
                throw DataError(std::string("split: id ") + std::to_string(id) +
                                " appears in more than one subset");
            }
        }
    };
    if (check_anomalous) check(split.anomalous_train, "anomalous_train");
    check(split.normal_train, "normal_train");
    check(split.validation, "validation");
    check(split.test, "test");
    if (!split.truth.empty() && static_cast<int>(split.truth.size()) != n_nodes) {
        throw DataError("split: ground truth must cover all nodes");
    }
}

/// Exact Mann-Whitney AUC with half-credit ties, by sort and average ranks.
/// Anomalous (label 1) is the positive class. O(n log n), and exactly equal
/// to brute-force pair counting: both routes reduce to the same integer
/// numerator in half-pair units.
template <class Real>
Real auc(const std::vector<Real>& scores, const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size()) throw DataError("auc: scores/labels size mismatch");
    const std::size_t n = scores.size();
    const std::size_t n_pos =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t(1)));
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("auc: need at least one anomalous and one normal label");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] != scores[b] ? scores[a] < scores[b] : a < b;
    });

    // twice the positive rank sum, so tie-group average ranks stay integral
    long long two_rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const long long two_avg_rank = static_cast<long long>(i + 1) + static_cast<long long>(j);
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) two_rank_sum_pos += two_avg_rank;
        }
        i = j;
    }
    const long long two_u =
        two_rank_sum_pos - static_cast<long long>(n_pos) * static_cast<long long>(n_pos + 1);
    return static_cast<Real>(two_u) /
           (Real(2) * static_cast<Real>(n_pos) * static_cast<Real>(n_neg));
}

/// Anomaly scores for the requested ids after one forward pass.
template <class Real>
std::vector<Real> score_nodes(const GcnModel<Real>& model, const Center<Real>& center,
                              const NormalizedAdjacency<Real>& s, const Matrix<Real>& x,
                              const std::vector<int>& ids) {
    const ForwardCache<Real> cache = forward(model, s, x);
    const Vector<Real> all = anomaly_scores(cache.embeddings(), center);
    std::vector<Real> out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (id < 0 || id >= s.n) {
            throw DataError("score_nodes: id " + std::to_string(id) + " out of range");
        }
        out.push_back(all[id]);
    }
    return out;
}

template <class Real>
struct EvalReport {
    Real test_auc = Real(0);
    Real validation_criterion = Real(0);  // AUC in mode an, mean normal score in mode n
    Mode mode = Mode::an;
    Vector<Real> scores;  // all nodes
    int n_test = 0;
    int n_test_anomalous = 0;
    int n_validation = 0;
};

namespace detail {

template <class Real>
Real validation_criterion(const Vector<Real>& scores, const LabelSplit& split, Mode mode) {
    if (split.validation.empty()) throw DataError("evaluate: empty validation set");
    if (mode == Mode::an) {
        std::vector<Real> vs;
        std::vector<std::uint8_t> vl;
        vs.reserve(split.validation.size());
        vl.reserve(split.validation.size());
        for (int id : split.validation) {
            vs.push_back(scores[id]);
            vl.push_back(split.truth[static_cast<std::size_t>(id)]);
        }
        return auc<Real>(vs, vl);
    }
    Real sum = Real(0);
    std::size_t count = 0;
    for (int id : split.validation) {
        if (!split.truth[static_cast<std::size_t>(id)]) {
            sum += scores[id];
            ++count;
        }
    }
    if (count == 0) throw DataError("evaluate: no normal nodes in the validation set");
    return sum / static_cast<Real>(count);
}

}  // namespace detail

/// Single-split evaluation: test AUC against ground truth plus the
/// mode-dependent validation criterion. Replicate averaging is CLI-level.
template <class Real>
EvalReport<Real> evaluate(const GcnModel<Real>& model, const Center<Real>& center,
                          const AttributedGraph<Real>& graph, const LabelSplit& split,
                          Mode mode) {
    validate_split(split, graph.n_nodes, mode == Mode::an);
    if (split.truth.empty()) throw DataError("evaluate: split carries no ground truth");

    const NormalizedAdjacency<Real> s = normalized_adjacency(graph);
    const Matrix<Real> x = effective_attributes(graph);
    const ForwardCache<Real> cache = forward(model, s, x);

    EvalReport<Real> report;
    report.mode = mode;
    report.scores = anomaly_scores(cache.embeddings(), center);

    std::vector<Real> test_scores;
    std::vector<std::uint8_t> test_labels;
    test_scores.reserve(split.test.size());
    test_labels.reserve(split.test.size());
    for (int id : split.test) {
        test_scores.push_back(report.scores[id]);
        test_labels.push_back(split.truth[static_cast<std::size_t>(id)]);
    }
    report.test_auc = auc<Real>(test_scores, test_labels);
    report.validation_criterion = detail::validation_criterion(report.scores, split, mode);
    report.n_test = static_cast<int>(split.test.size());
    report.n_test_anomalous =
        static_cast<int>(std::count(test_labels.begin(), test_labels.end(), std::uint8_t(1)));
    report.n_validation = static_cast<int>(split.validation.size());
    return report;
}

}  // namespace graphsphere
