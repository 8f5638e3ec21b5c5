#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <graphsphere/graphsphere.hpp>

// Independent reference implementations the tests check the library against.
// Everything here favors directness over speed: dense matrices, per-node
// loops, O(n^2) pair counting.

namespace oracles {

namespace gs = graphsphere;

// Dense symmetric adjacency (no self loops) from the canonical edge list.
template <class Real>
gs::Matrix<Real> dense_adjacency(const gs::AttributedGraph<Real>& g) {
    gs::Matrix<Real> a = gs::Matrix<Real>::Zero(g.n_nodes, g.n_nodes);
    for (const auto& e : g.edges) {
        a(e.u, e.v) = e.weight;
        a(e.v, e.u) = e.weight;
    }
    return a;
}

// Dense D^{-1/2} (A + I) D^{-1/2} with D = diag(row degree + 1).
template <class Real>
gs::Matrix<Real> dense_normalized(const gs::AttributedGraph<Real>& g) {
    gs::Matrix<Real> a = dense_adjacency(g);
    gs::Vector<Real> dtilde = a.rowwise().sum();
    for (int i = 0; i < g.n_nodes; ++i) dtilde[i] += Real(1);
    gs::Matrix<Real> out = a + gs::Matrix<Real>::Identity(g.n_nodes, g.n_nodes);
    for (int i = 0; i < g.n_nodes; ++i) {
        for (int j = 0; j < g.n_nodes; ++j) {
            out(i, j) /= std::sqrt(dtilde[i] * dtilde[j]);
        }
    }
    return out;
}

// Sparse operator materialized densely, for entrywise comparison.
template <class Real>
gs::Matrix<Real> materialize(const gs::NormalizedAdjacency<Real>& s) {
    gs::Matrix<Real> out = gs::Matrix<Real>::Zero(s.n, s.n);
    for (int i = 0; i < s.n; ++i) {
        for (std::size_t k = s.row_ptr[static_cast<std::size_t>(i)];
             k < s.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            out(i, s.col_idx[k]) = s.values[k];
        }
    }
    return out;
}

// Node-by-node neighbor summation: out[n] = sum_m a~_nm/sqrt(d~_n d~_m) M[m],
// walking the edge list directly rather than any matrix structure.
template <class Real>
gs::Matrix<Real> neighbor_sum_propagate(const gs::AttributedGraph<Real>& g,
                                        const gs::Matrix<Real>& m) {
    std::vector<Real> dtilde(static_cast<std::size_t>(g.n_nodes), Real(1));
    for (const auto& e : g.edges) {
        dtilde[static_cast<std::size_t>(e.u)] += e.weight;
        dtilde[static_cast<std::size_t>(e.v)] += e.weight;
    }
    gs::Matrix<Real> out = gs::Matrix<Real>::Zero(m.rows(), m.cols());
    for (int n = 0; n < g.n_nodes; ++n) {
        out.row(n) = m.row(n) / dtilde[static_cast<std::size_t>(n)];  // self connection
    }
    for (const auto& e : g.edges) {
        const Real w =
            e.weight / std::sqrt(dtilde[static_cast<std::size_t>(e.u)] *
                                 dtilde[static_cast<std::size_t>(e.v)]);
        out.row(e.u) += w * m.row(e.v);
        out.row(e.v) += w * m.row(e.u);
    }
    return out;
}

// Bias-free multilayer perceptron on X: rectifier on hidden layers, the
// configured activation on the last. The degenerate edgeless-graph case.
template <class Real>
gs::Matrix<Real> mlp_forward(const std::vector<gs::Matrix<Real>>& weights,
                             const gs::Matrix<Real>& x, gs::Activation final_activation) {
    gs::Matrix<Real> h = x;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        h = h * weights[l];
        const bool last = l + 1 == weights.size();
        if (!last || final_activation == gs::Activation::relu) {
            h = h.cwiseMax(Real(0));
        }
    }
    return h;
}

// O(n^2) pair counting with half-credit ties.
template <class Real>
double brute_auc(const std::vector<Real>& scores, const std::vector<std::uint8_t>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

// Central finite differences of a scalar function against one matrix entry at
// a time. `param` is mutated and restored in place.
template <class Real, class LossFn>
gs::Matrix<Real> finite_difference(gs::Matrix<Real>& param, LossFn&& loss, Real step) {
    gs::Matrix<Real> grad(param.rows(), param.cols());
    for (Eigen::Index r = 0; r < param.rows(); ++r) {
        for (Eigen::Index c = 0; c < param.cols(); ++c) {
            const Real saved = param(r, c);
            param(r, c) = saved + step;
            const Real up = loss();
            param(r, c) = saved - step;
            const Real down = loss();
            param(r, c) = saved;
            grad(r, c) = (up - down) / (Real(2) * step);
        }
    }
    return grad;
}

template <class Real>
Real max_relative_error(const gs::Matrix<Real>& a, const gs::Matrix<Real>& b,
                        Real floor = Real(1e-8)) {
    Real worst = Real(0);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            const Real denom = std::max({std::abs(a(r, c)), std::abs(b(r, c)), floor});
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)) / denom);
        }
    }
    return worst;
}

// Scalar reference Adam: one parameter, plain loops, kept for traces the
// matrix implementation must reproduce.
struct ScalarAdam {
    double m = 0.0;
    double v = 0.0;
    long long t = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    double step(double w, double g, double lr) {
        ++t;
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g * g;
        const double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
        const double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
        return w - lr * mhat / (std::sqrt(vhat) + eps);
    }
};

// Random Erdos-Renyi-style test graph with random attributes in [0,1].
template <class Real>
gs::AttributedGraph<Real> random_graph(gs::Rng& rng, int n, double edge_prob, int dim,
                                       bool weighted = false) {
    std::vector<gs::Edge<Real>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform01() < edge_prob) {
                const Real w = weighted ? static_cast<Real>(0.25 + rng.uniform01()) : Real(1);
                edges.push_back({u, v, w});
            }
        }
    }
    gs::Matrix<Real> x(n, dim);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < dim; ++c) x(r, c) = static_cast<Real>(rng.uniform01());
    }
    return gs::build_graph<Real>(n, std::move(edges), std::move(x));
}

// Unique temporary directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "graphsphere-test-XXXXXX").string();
        if (::mkdtemp(tmpl.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace oracles
