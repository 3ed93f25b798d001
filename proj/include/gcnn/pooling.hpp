#pragma once

// Graph pooling operators reducing (x, A) to (x', A'). Top-k and SagPool
// select nodes (A' is plain submatrix extraction); SortPool ranks and
// truncates/pads to a fixed size (doubling as aggregation); DiffPool learns
// a soft assignment S and produces a dense A' = S^T A S on the tape so that
// gradients flow through the coarsened structure. All ties break toward the
// lower node index.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcnn/autodiff.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/layers.hpp"

namespace gcnn {

struct PoolResult {
    int x = -1;                          // reduced signal (tape var)
    std::optional<Graph> reduced_graph;  // Top-k / Sag: induced subgraph
    int reduced_dense = -1;              // DiffPool: dense A' (tape var)
    std::vector<int> kept;               // selection record
    Tensor assignment;                   // DiffPool: S values
    std::vector<std::pair<std::string, int>> aux_losses;  // named scalar vars
};

// Indices of the ceil(ratio * N) best-scoring rows, ascending. Ties keep the
// lower index.
inline std::vector<int> topk_select(const Tensor& scores, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("pooling: ratio must lie in (0, 1]");
    const int n = scores.rows;
    const int keep = static_cast<int>(std::ceil(ratio * n));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores.at(a, 0) != scores.at(b, 0)) return scores.at(a, 0) > scores.at(b, 0);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(keep));
    std::sort(order.begin(), order.end());
    return order;
}

// Scores s = x * p / ||p||; kept rows are gated by tanh(s) so the projection
// vector stays trainable.
inline PoolResult topk_pool(Tape& t, const Graph& g, int x, double ratio, Tensor* p) {
    if (t.value(x).rows != g.num_nodes()) throw ShapeError("topk_pool: signal rows != vertex count");
    int proj = t.normalize_l2(t.leaf(p));
    int s = t.matmul(x, proj);
    PoolResult out;
    out.kept = topk_select(t.value(s), ratio);
    int xg = t.gather_rows(x, out.kept);
    int gate = t.tanh_op(t.gather_rows(s, out.kept));
    out.x = t.scale_rows(xg, gate);
    out.reduced_graph = induced_subgraph(g, out.kept);
    return out;
}

// Self-attention scores from a 1-channel GCN layer (tanh), used both for
// selection and gating.
inline PoolResult sag_pool(Tape& t, const Graph& g, int x, double ratio, GcnLayer& scorer,
                           const Graph& scorer_support) {
    if (t.value(x).rows != g.num_nodes()) throw ShapeError("sag_pool: signal rows != vertex count");
    if (scorer.W.cols != 1) throw ShapeError("sag_pool: scorer must emit one channel");
    int s = gcn_forward(t, scorer, scorer_support, x, Act::tanh);
    PoolResult out;
    out.kept = topk_select(t.value(s), ratio);
    int xg = t.gather_rows(x, out.kept);
    int gate = t.gather_rows(s, out.kept);
    out.x = t.scale_rows(xg, gate);
    out.reduced_graph = induced_subgraph(g, out.kept);
    return out;
}

// Rows sorted descending by the last feature channel (ties: earlier
// channels, then index), truncated or zero-padded to exactly k rows. The
// result feeds the dense head directly.
inline PoolResult sort_pool(Tape& t, int x, int k) {
    if (k < 1) throw DomainError("sort_pool: k must be positive");
    const Tensor& xv = t.value(x);
    const int n = xv.rows, c = xv.cols;
    if (c < 1) throw ShapeError("sort_pool: signal needs at least one channel");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int j = c - 1; j >= 0; --j) {
            if (xv.at(a, j) != xv.at(b, j)) return xv.at(a, j) > xv.at(b, j);
        }
        return a < b;
    });
    PoolResult out;
    std::vector<int> idx;
    for (int r = 0; r < k; ++r) {
        if (r < n) {
            idx.push_back(order[static_cast<std::size_t>(r)]);
            out.kept.push_back(order[static_cast<std::size_t>(r)]);
        } else {
            idx.push_back(-1);  // zero padding
        }
    }
    out.x = t.gather_rows(x, idx);
    return out;
}

// S = softmax(assign_gnn(x)); x' = S^T embed_gnn(x); A' = S^T A S, with the
// link-prediction and assignment-entropy auxiliary losses.
inline PoolResult diff_pool(Tape& t, const Graph& g, int x, GcnLayer& assign_gnn, GcnLayer& embed_gnn,
                            const Graph& support, int n_clusters) {
    const int n = g.num_nodes();
    if (t.value(x).rows != n) throw ShapeError("diff_pool: signal rows != vertex count");
    if (n_clusters < 1) throw DomainError("diff_pool: cluster count must be positive");
    if (n_clusters > n) throw DomainError("diff_pool: cluster count exceeds vertex count");
    if (assign_gnn.W.cols != n_clusters) throw ShapeError("diff_pool: assignment width != cluster count");

    int s = t.softmax_rows(gcn_forward(t, assign_gnn, support, x, Act::none));
    int z = gcn_forward(t, embed_gnn, support, x, Act::none);
    int st = t.transpose(s);

    PoolResult out;
    out.x = t.matmul(st, z);
    int a = t.constant(g.dense_tensor());
    out.reduced_dense = t.matmul(t.matmul(st, a), s);
    out.assignment = t.value(s);

    // link loss ||A - S S^T||_F / N^2
    int recon = t.matmul(s, st);
    int diff = t.add(a, t.scale(recon, -1.0));
    int link = t.scale(t.sqrt_op(t.sum_all(t.hadamard(diff, diff))), 1.0 / (static_cast<double>(n) * n));
    // mean row entropy of S (0 * log 0 := 0): zero exactly on one-hot rows
    int ent = t.scale(t.sum_all(t.xlogx(s)), -1.0 / n);
    out.aux_losses.emplace_back("link", link);
    out.aux_losses.emplace_back("entropy", ent);
    return out;
}

}  // namespace gcnn
