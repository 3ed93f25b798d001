#pragma once

// Collapse a variable-size node signal into a fixed-length graph vector:
// per-column readout statistics, the signal-free harmonic-distance histogram
// (F_GSD style), and the dense prediction head that follows aggregation.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gcnn/autodiff.hpp"
#include "gcnn/eig.hpp"
#include "gcnn/graph.hpp"

namespace gcnn {

enum class ReadoutStat { mean, sum, max, var };

// Concatenates the requested per-column statistics in the canonical order
// mean, sum, max, variance (population variance: exact zero for one node).
inline int readout(Tape& t, int x, const std::vector<ReadoutStat>& stats) {
    if (stats.empty()) throw DomainError("readout: empty statistic set");
    if (t.value(x).rows < 1) throw DomainError("readout: empty graph (no rows)");
    std::set<ReadoutStat> want(stats.begin(), stats.end());
    std::vector<int> parts;
    const std::pair<ReadoutStat, Reduce> canonical[] = {
        {ReadoutStat::mean, Reduce::mean},
        {ReadoutStat::sum, Reduce::sum},
        {ReadoutStat::max, Reduce::max},
        {ReadoutStat::var, Reduce::var},
    };
    for (const auto& [stat, kind] : canonical)
        if (want.count(stat)) parts.push_back(t.reduce(x, kind));
    return parts.size() == 1 ? parts[0] : t.concat_cols(parts);
}

// Harmonic spectral distances S(i,j) = sum_{lambda_k > tau} (phi_k(i) -
// phi_k(j))^2 / lambda_k over Laplacian eigenpairs (pseudo-inverse cutoff
// tau = 1e-9), binned into a normalized histogram over [0, range_max] with
// overflow clamped into the last bin. Signal-free by construction.
inline Tensor fgsd_features(const Graph& g, int bins = 32, double range_max = 4.0) {
    if (g.directed()) throw DomainError("fgsd_features: unsupported on directed graphs");
    const int n = g.num_nodes();
    if (n < 2) throw DomainError("fgsd_features: degenerate graph (fewer than two nodes)");
    if (bins < 1) throw DomainError("fgsd_features: bins must be positive");
    if (!(range_max > 0.0)) throw DomainError("fgsd_features: range_max must be positive");

    auto a = g.dense();
    auto deg = degree_matrix(g);
    std::vector<double> lap(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            lap[static_cast<std::size_t>(i) * n + j] =
                (i == j ? deg[static_cast<std::size_t>(i)] : 0.0) - a[static_cast<std::size_t>(i) * n + j];
    auto eig = sym_eigen(n, std::move(lap));

    constexpr double tau = 1e-9;
    Tensor hist(1, bins);
    const double width = range_max / bins;
    const double pairs = n * (n - 1) / 2.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double lambda = eig.values[static_cast<std::size_t>(k)];
                if (lambda <= tau) continue;
                double diff = eig.vectors[static_cast<std::size_t>(i) * n + k] -
                              eig.vectors[static_cast<std::size_t>(j) * n + k];
                s += diff * diff / lambda;
            }
            int bin = std::min(bins - 1, static_cast<int>(s / width));
            hist.at(0, bin) += 1.0 / pairs;
        }
    return hist;
}

// ---------------------------------------------------------------------------
// Dense head after aggregation.

struct DenseLayer {
    Tensor W;  // (in x out)
    Tensor b;  // (1 x out)
};

// One or two dense layers with bias and ReLU between; the final layer emits
// raw logits.
inline int head_forward(Tape& t, std::vector<DenseLayer>& layers, int v) {
    if (layers.empty()) throw DomainError("head_forward: no dense layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        v = t.add(t.matmul(v, t.leaf(&layers[i].W)), t.leaf(&layers[i].b));
        if (i + 1 < layers.size()) v = t.relu(v);
    }
    return v;
}

}  // namespace gcnn
