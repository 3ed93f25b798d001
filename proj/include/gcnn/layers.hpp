#pragma once

// Graph convolutional layers. A GCN layer computes sigma(S x W) where S is
// the cached normalized adjacency with self-loops; a TAGCN layer computes
// sigma(sum_k A^k x W_k) with the powers applied by iterated sparse shifts.
// Both come in a sparse-support and a dense-support form; the dense form is
// used after differentiable pooling, where the adjacency itself lives on
// the tape.

#include <vector>

#include "gcnn/autodiff.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/gsp.hpp"

namespace gcnn {

enum class Act { none, relu, tanh };

inline int apply_act(Tape& t, int x, Act a) {
    switch (a) {
        case Act::none: return x;
        case Act::relu: return t.relu(x);
        case Act::tanh: return t.tanh_op(x);
    }
    return x;
}

struct GcnLayer {
    Tensor W;  // (C x F)
};

struct TagcnLayer {
    std::vector<Tensor> W;  // W[k] is (C x F), k = 0..K

    int degree() const { return static_cast<int>(W.size()) - 1; }
};

// Standard GCN preprocessing: self-loops then symmetric normalization.
inline Graph gcn_support(const Graph& g) { return normalize_sym(add_self_loops(g)); }

// TAGCN preprocessing: symmetric normalization for undirected graphs,
// spectral-radius normalization for directed ones.
inline Graph tagcn_support(const Graph& g) {
    return g.directed() ? normalize_spectral(g) : normalize_sym(g);
}

// The weight tensors are registered as tape leaves, so they must outlive
// the tape (they normally live in a Model).

inline int gcn_forward(Tape& t, Tensor& w, const Graph& support, int x, Act act = Act::relu) {
    int h = t.sparse_matmul(support, x);
    h = t.matmul(h, t.leaf(&w));
    return apply_act(t, h, act);
}

inline int gcn_forward(Tape& t, GcnLayer& layer, const Graph& support, int x, Act act = Act::relu) {
    return gcn_forward(t, layer.W, support, x, act);
}

inline int gcn_forward_dense(Tape& t, Tensor& w, int support, int x, Act act = Act::relu) {
    int h = t.matmul(support, x);
    h = t.matmul(h, t.leaf(&w));
    return apply_act(t, h, act);
}

inline int tagcn_forward(Tape& t, std::vector<Tensor>& w, const Graph& support, int x,
                         Act act = Act::relu) {
    if (w.empty()) throw DomainError("tagcn_forward: no coefficient matrices");
    const int degree = static_cast<int>(w.size()) - 1;
    if (degree >= support.num_nodes())
        throw DomainError("tagcn_forward: filter degree must be below the vertex count");
    int acc = t.matmul(x, t.leaf(&w[0]));
    int h = x;
    for (int k = 1; k <= degree; ++k) {
        h = t.sparse_matmul(support, h);
        acc = t.add(acc, t.matmul(h, t.leaf(&w[static_cast<std::size_t>(k)])));
    }
    return apply_act(t, acc, act);
}

inline int tagcn_forward(Tape& t, TagcnLayer& layer, const Graph& support, int x, Act act = Act::relu) {
    return tagcn_forward(t, layer.W, support, x, act);
}

inline int tagcn_forward_dense(Tape& t, std::vector<Tensor>& w, int support, int x,
                               Act act = Act::relu) {
    if (w.empty()) throw DomainError("tagcn_forward: no coefficient matrices");
    const int degree = static_cast<int>(w.size()) - 1;
    if (degree >= t.value(support).rows)
        throw DomainError("tagcn_forward: filter degree must be below the vertex count");
    int acc = t.matmul(x, t.leaf(&w[0]));
    int h = x;
    for (int k = 1; k <= degree; ++k) {
        h = t.matmul(support, h);
        acc = t.add(acc, t.matmul(h, t.leaf(&w[static_cast<std::size_t>(k)])));
    }
    return apply_act(t, acc, act);
}

// A + I on the tape.
inline int add_identity_var(Tape& t, int a) {
    return t.add(a, t.constant(Tensor::identity(t.value(a).rows)));
}

// Differentiable D^{-1/2} A D^{-1/2} for a dense adjacency living on the
// tape; (near-)zero degrees map to zero rows via the rsqrt cutoff.
inline int normalize_dense_sym_var(Tape& t, int a) {
    const int n = t.value(a).rows;
    if (t.value(a).cols != n) throw ShapeError("normalize_dense_sym_var: adjacency must be square");
    int ones = t.constant(Tensor::full(n, 1, 1.0));
    int deg = t.matmul(a, ones);
    int r = t.rsqrt_op(deg);
    return t.scale_cols(t.scale_rows(a, r), r);
}

}  // namespace gcnn
