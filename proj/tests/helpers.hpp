#pragma once

// Shared test utilities: random fixtures and independent numerical oracles.
// Everything here stays independent of the implementation paths it checks.

#include <cmath>
#include <functional>
#include <vector>

#include "gcnn/graph.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/tensor.hpp"

namespace testutil {

using gcnn::EdgeTriple;
using gcnn::Graph;
using gcnn::Rng;
using gcnn::Tensor;

inline Graph random_undirected(int n, double p, Rng& rng, bool weighted = true) {
    std::vector<EdgeTriple> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) pairs.push_back({i, j, weighted ? rng.uniform(0.2, 1.5) : 1.0});
    return Graph::from_undirected_pairs(n, pairs);
}

inline Graph random_directed(int n, double p, Rng& rng, bool weighted = true) {
    std::vector<EdgeTriple> trip;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng.uniform() < p) trip.push_back({i, j, weighted ? rng.uniform(0.2, 1.5) : 1.0});
    return Graph(n, true, std::move(trip));
}

inline Tensor random_tensor(int r, int c, Rng& rng, double scale = 1.0) {
    Tensor t(r, c);
    for (auto& v : t.data) v = scale * rng.normal();
    return t;
}

// Central finite differences of a scalar function with respect to every
// entry of `param`.
inline std::vector<double> finite_diff(Tensor& param, const std::function<double()>& f, double h = 1e-5) {
    std::vector<double> g(param.data.size(), 0.0);
    for (std::size_t i = 0; i < param.data.size(); ++i) {
        double keep = param.data[i];
        param.data[i] = keep + h;
        double fp = f();
        param.data[i] = keep - h;
        double fm = f();
        param.data[i] = keep;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Max relative error between analytic and numerical gradients, with an
// absolute floor so near-zero entries do not blow up the ratio.
inline double max_rel_err(const std::vector<double>& analytic, const std::vector<double>& numeric,
                          double floor = 1e-6) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
    }
    return worst;
}

}  // namespace testutil
