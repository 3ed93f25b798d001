#pragma once

// Graph-structure effectiveness metric: n-th order interclass connectivity
// probabilities and the per-class edge entropy. Walks are counted on the
// binarized adjacency (weight > 0) with the matrix-power reading: revisiting
// nodes is allowed and every walk counts with multiplicity. Classes with no
// length-n walks report a missing value, never a number.

#include <cmath>
#include <optional>
#include <vector>

#include "gcnn/errors.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/tensor.hpp"

namespace gcnn {

struct EntropyReport {
    int order = 1;
    int num_classes = 0;
    Tensor p;                            // M x M; undefined rows are NaN
    std::vector<std::optional<double>> h;  // per-class entropy in [0, 1]
    std::vector<int> undefined_classes;
};

namespace detail {

inline int class_count(const Graph& g, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != g.num_nodes())
        throw ShapeError("edge entropy: label count != vertex count");
    int m = 0;
    for (int l : labels) {
        if (l < 0) throw DomainError("edge entropy: unlabeled node (label < 0)");
        m = std::max(m, l + 1);
    }
    if (m == 0) throw DomainError("edge entropy: empty graph has no classes");
    return m;
}

}  // namespace detail

// Walk counts c_ij = 1_{V_i}^T B^n 1_{V_j} on the binarized adjacency,
// normalized per start class; rows with no walks are marked undefined.
inline Tensor interclass_probability(const Graph& g, const std::vector<int>& labels, int order,
                                     std::vector<bool>* defined_out = nullptr) {
    if (order < 1) throw DomainError("interclass_probability: walk length must be >= 1");
    const int m = detail::class_count(g, labels);
    const int n = g.num_nodes();

    Tensor p(m, m);
    std::vector<bool> defined(static_cast<std::size_t>(m), false);
    std::vector<double> row(static_cast<std::size_t>(n)), next(static_cast<std::size_t>(n));
    for (int ci = 0; ci < m; ++ci) {
        std::fill(row.begin(), row.end(), 0.0);
        for (int v = 0; v < n; ++v)
            if (labels[static_cast<std::size_t>(v)] == ci) row[static_cast<std::size_t>(v)] = 1.0;
        for (int step = 0; step < order; ++step) {
            std::fill(next.begin(), next.end(), 0.0);
            for (const auto& e : g.edges())
                if (e.weight > 0.0)
                    next[static_cast<std::size_t>(e.dst)] += row[static_cast<std::size_t>(e.src)];
            row.swap(next);
        }
        double total = 0.0;
        for (int v = 0; v < n; ++v) {
            p.at(ci, labels[static_cast<std::size_t>(v)]) += row[static_cast<std::size_t>(v)];
            total += row[static_cast<std::size_t>(v)];
        }
        if (total > 0.0) {
            defined[static_cast<std::size_t>(ci)] = true;
            for (int cj = 0; cj < m; ++cj) p.at(ci, cj) /= total;
        } else {
            for (int cj = 0; cj < m; ++cj) p.at(ci, cj) = std::numeric_limits<double>::quiet_NaN();
        }
    }
    if (defined_out) *defined_out = std::move(defined);
    return p;
}

// H_n(i) = -sum_j p_ij(n) log_M p_ij(n), with 0 log 0 := 0; base-M logs
// normalize the entropy into [0, 1].
inline EntropyReport edge_entropy(const Graph& g, const std::vector<int>& labels, int order) {
    const int m = detail::class_count(g, labels);
    if (m == 1) throw DomainError("edge_entropy: single-class labeling (log base 1 undefined)");

    EntropyReport rep;
    rep.order = order;
    rep.num_classes = m;
    std::vector<bool> defined;
    rep.p = interclass_probability(g, labels, order, &defined);
    rep.h.resize(static_cast<std::size_t>(m));
    const double log_m = std::log(static_cast<double>(m));
    for (int ci = 0; ci < m; ++ci) {
        if (!defined[static_cast<std::size_t>(ci)]) {
            rep.h[static_cast<std::size_t>(ci)] = std::nullopt;
            rep.undefined_classes.push_back(ci);
            continue;
        }
        double h = 0.0;
        for (int cj = 0; cj < m; ++cj) {
            double pij = rep.p.at(ci, cj);
            if (pij > 0.0) h -= pij * std::log(pij) / log_m;
        }
        rep.h[static_cast<std::size_t>(ci)] = h;
    }
    return rep;
}

// Mean entropy over defined classes; nullopt when every class is undefined.
inline std::optional<double> mean_entropy(const EntropyReport& rep) {
    double s = 0.0;
    int n = 0;
    for (const auto& h : rep.h)
        if (h) {
            s += *h;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return s / n;
}

}  // namespace gcnn
