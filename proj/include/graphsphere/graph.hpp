#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "graphsphere/errors.hpp"
#include "graphsphere/matrix.hpp"

namespace graphsphere {

template <class Real>
struct Edge {
    int u = 0;
    int v = 0;
    Real weight = Real(1);
};

/// Immutable undirected attributed graph. `edges` is canonical after
/// build_graph: u < v, sorted lexicographically, no duplicates, no self loops.
template <class Real>
struct AttributedGraph {
    int n_nodes = 0;
    std::vector<Edge<Real>> edges;
    Matrix<Real> attributes;  // n_nodes x D, D may be 0

    int dim() const { return static_cast<int>(attributes.cols()); }

    // weighted degree d_n = sum of incident edge weights (self connection excluded)
    std::vector<Real> weighted_degrees() const {
        std::vector<Real> d(static_cast<std::size_t>(n_nodes), Real(0));
        for (const auto& e : edges) {
            d[static_cast<std::size_t>(e.u)] += e.weight;
            d[static_cast<std::size_t>(e.v)] += e.weight;
        }
        return d;
    }
};

struct BuildStats {
    std::size_t duplicates_merged = 0;
    std::size_t self_loops_dropped = 0;
};

/// Validates, symmetrizes and deduplicates a raw edge list. Reverse/duplicate
/// entries merge when their weights agree exactly; conflicting weights are an
/// error. Self loops are dropped (the propagation rule adds exactly one
/// self-connection itself) and counted in `stats`.
template <class Real>
AttributedGraph<Real> build_graph(int n_nodes, std::vector<Edge<Real>> raw_edges,
                                  Matrix<Real> attributes, BuildStats* stats = nullptr) {
    if (n_nodes < 1) throw DataError("build_graph: n_nodes must be >= 1");
    if (attributes.rows() != n_nodes) {
        throw DataError("build_graph: attribute matrix has " +
                        std::to_string(attributes.rows()) + " rows but the graph has " +
                        std::to_string(n_nodes) + " nodes");
    }

    BuildStats local;
    std::vector<Edge<Real>> canon;
    canon.reserve(raw_edges.size());
    for (const auto& e : raw_edges) {
        if (e.u < 0 || e.u >= n_nodes || e.v < 0 || e.v >= n_nodes) {
            throw DataError("build_graph: edge (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + ") has an id out of range [0," +
                            std::to_string(n_nodes) + ")");
        }
        if (!(e.weight > Real(0))) {
            throw DataError("build_graph: edge (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + ") has non-positive weight");
        }
        if (e.u == e.v) {
            ++local.self_loops_dropped;
            continue;
        }
        canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
    }

    std::sort(canon.begin(), canon.end(), [](const Edge<Real>& a, const Edge<Real>& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    std::vector<Edge<Real>> dedup;
    dedup.reserve(canon.size());
    for (const auto& e : canon) {
        if (!dedup.empty() && dedup.back().u == e.u && dedup.back().v == e.v) {
            if (dedup.back().weight != e.weight) {
                throw DataError("build_graph: edge (" + std::to_string(e.u) + "," +
                                std::to_string(e.v) + ") appears with conflicting weights");
            }
            ++local.duplicates_merged;
            continue;
        }
        dedup.push_back(e);
    }

    if (stats) *stats = local;
    return AttributedGraph<Real>{n_nodes, std::move(dedup), std::move(attributes)};
}

/// Sparse symmetric operator S = D^{-1/2} (A + I) D^{-1/2} in compressed-row
/// layout with columns sorted ascending inside each row. Entry ordering is
/// fixed, so products over it are bit-reproducible.
template <class Real>
struct NormalizedAdjacency {
    int n = 0;
    std::vector<int> row_ptr;  // n + 1 offsets
    std::vector<int> col_idx;
    std::vector<Real> values;

    std::size_t nnz() const { return values.size(); }
};

template <class Real>
NormalizedAdjacency<Real> normalized_adjacency(const AttributedGraph<Real>& g) {
    const int n = g.n_nodes;
    const std::vector<Real> deg = g.weighted_degrees();

    // adjacency lists including the self connection, one shared value per
    // unordered pair so stored symmetry is exact
    std::vector<std::vector<std::pair<int, Real>>> rows(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        rows[static_cast<std::size_t>(u)].push_back({u, Real(1) / (deg[static_cast<std::size_t>(u)] + Real(1))});
    }
    for (const auto& e : g.edges) {
        const Real value = e.weight / std::sqrt((deg[static_cast<std::size_t>(e.u)] + Real(1)) *
                                                (deg[static_cast<std::size_t>(e.v)] + Real(1)));
        rows[static_cast<std::size_t>(e.u)].push_back({e.v, value});
        rows[static_cast<std::size_t>(e.v)].push_back({e.u, value});
    }

    NormalizedAdjacency<Real> s;
    s.n = n;
    s.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    std::size_t total = 0;
    for (int u = 0; u < n; ++u) {
        auto& row = rows[static_cast<std::size_t>(u)];
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        total += row.size();
        s.row_ptr[static_cast<std::size_t>(u) + 1] = static_cast<int>(total);
    }
    s.col_idx.reserve(total);
    s.values.reserve(total);
    for (int u = 0; u < n; ++u) {
        for (const auto& [c, v] : rows[static_cast<std::size_t>(u)]) {
            s.col_idx.push_back(c);
            s.values.push_back(v);
        }
    }
    return s;
}

/// Exact sparse-dense product S * M with per-row accumulation in stored entry
/// order. Rows are independent, so a parallel implementation stays
/// bit-identical as long as the in-row order is preserved.
template <class Real>
Matrix<Real> propagate(const NormalizedAdjacency<Real>& s, const Matrix<Real>& m) {
    if (m.rows() != s.n) {
        throw DataError("propagate: operator is " + std::to_string(s.n) + "x" +
                        std::to_string(s.n) + " but matrix has " + std::to_string(m.rows()) +
                        " rows");
    }
    if (m.cols() < 1) throw DataError("propagate: matrix must have at least one column");

    Matrix<Real> out(m.rows(), m.cols());
    for (int r = 0; r < s.n; ++r) {
        auto row = out.row(r);
        row.setZero();
        const int begin = s.row_ptr[static_cast<std::size_t>(r)];
        const int end = s.row_ptr[static_cast<std::size_t>(r) + 1];
        for (int k = begin; k < end; ++k) {
            row += s.values[static_cast<std::size_t>(k)] *
                   m.row(s.col_idx[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

/// Column-wise min-max rescaling to [0,1]; constant columns map to all zeros.
template <class Real>
Matrix<Real> rescale_attributes(const Matrix<Real>& x) {
    if (!x.allFinite()) throw DataError("rescale_attributes: non-finite attribute value");
    Matrix<Real> out = x;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const Real lo = x.col(c).minCoeff();
        const Real hi = x.col(c).maxCoeff();
        if (lo == hi) {
            out.col(c).setZero();
        } else {
            out.col(c) = (x.col(c).array() - lo) / (hi - lo);
        }
    }
    return out;
}

/// Stand-in attributes for graphs without any: X = I.
template <class Real>
Matrix<Real> identity_attributes(int n) {
    if (n < 1) throw DataError("identity_attributes: n must be >= 1");
    return Matrix<Real>::Identity(n, n);
}

/// X = I substitution applied when a graph carries no attribute matrix.
template <class Real>
Matrix<Real> effective_attributes(const AttributedGraph<Real>& g) {
    if (g.dim() == 0) return identity_attributes<Real>(g.n_nodes);
    return g.attributes;
}

}  // namespace graphsphere
