#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "gcnn/errors.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/tensor.hpp"

namespace gcnn {

// Dense conversion guard; eigendecompositions are dense, so anything above
// this is supported for convolution but not for spectral ops.
inline constexpr int kDenseCap = 2000;

struct EdgeTriple {
    int src = 0;
    int dst = 0;
    double weight = 0.0;
};

inline bool operator==(const EdgeTriple& a, const EdgeTriple& b) {
    return a.src == b.src && a.dst == b.dst && a.weight == b.weight;
}

// Weighted sparse graph in canonical COO form: triplets sorted by (src, dst),
// duplicates coalesced by summation, exact zeros dropped. Undirected graphs
// store both orientations explicitly and the constructor enforces symmetry.
// Dense layout convention: dense[dst][src] = weight, so the shift A*x moves
// the value at src to dst (the directed ring reproduces the DSP delay).
// Immutable after construction.
class Graph {
public:
    Graph() = default;

    Graph(int n, bool directed, std::vector<EdgeTriple> triplets)
        : n_(n), directed_(directed), edges_(std::move(triplets)) {
        if (n < 0) throw DomainError("Graph: negative vertex count");
        canonicalize();
        validate();
    }

    static Graph empty(int n, bool directed = false) { return Graph(n, directed, {}); }

    // Builds an undirected graph from one triplet per unordered pair; the
    // mirror orientation is added automatically (self-loops stay single).
    static Graph from_undirected_pairs(int n, const std::vector<EdgeTriple>& pairs) {
        std::vector<EdgeTriple> trip;
        trip.reserve(pairs.size() * 2);
        for (const auto& e : pairs) {
            trip.push_back(e);
            if (e.src != e.dst) trip.push_back({e.dst, e.src, e.weight});
        }
        return Graph(n, false, std::move(trip));
    }

    int num_nodes() const { return n_; }
    bool directed() const { return directed_; }
    const std::vector<EdgeTriple>& edges() const { return edges_; }
    int stored_edge_count() const { return static_cast<int>(edges_.size()); }

    bool has_edge(int src, int dst) const { return find_edge(src, dst) >= 0; }

    double weight(int src, int dst) const {
        int i = find_edge(src, dst);
        return i < 0 ? 0.0 : edges_[static_cast<std::size_t>(i)].weight;
    }

    // Row-major dense adjacency, dense[dst*n + src] = weight.
    std::vector<double> dense(int cap = kDenseCap) const {
        if (n_ > cap) throw DomainError("Graph::dense: vertex count exceeds dense cap");
        std::vector<double> a(static_cast<std::size_t>(n_) * n_, 0.0);
        for (const auto& e : edges_) a[static_cast<std::size_t>(e.dst) * n_ + e.src] = e.weight;
        return a;
    }

    Tensor dense_tensor(int cap = kDenseCap) const {
        Tensor t(n_, n_);
        t.data = dense(cap);
        return t;
    }

private:
    int n_ = 0;
    bool directed_ = false;
    std::vector<EdgeTriple> edges_;

    int find_edge(int src, int dst) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair<int, int>{src, dst},
                                   [](const EdgeTriple& e, const std::pair<int, int>& k) {
                                       return std::pair<int, int>{e.src, e.dst} < k;
                                   });
        if (it == edges_.end() || it->src != src || it->dst != dst) return -1;
        return static_cast<int>(it - edges_.begin());
    }

    void canonicalize() {
        std::sort(edges_.begin(), edges_.end(), [](const EdgeTriple& a, const EdgeTriple& b) {
            return std::pair<int, int>{a.src, a.dst} < std::pair<int, int>{b.src, b.dst};
        });
        std::vector<EdgeTriple> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_) {
            if (!out.empty() && out.back().src == e.src && out.back().dst == e.dst)
                out.back().weight += e.weight;
            else
                out.push_back(e);
        }
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const EdgeTriple& e) { return e.weight == 0.0; }),
                  out.end());
        edges_ = std::move(out);
    }

    void validate() const {
        for (const auto& e : edges_) {
            if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_)
                throw DomainError("Graph: edge endpoint out of range");
            if (!std::isfinite(e.weight)) throw NumericError("Graph: non-finite edge weight");
        }
        if (!directed_) {
            for (const auto& e : edges_) {
                if (e.src == e.dst) continue;
                if (weight(e.dst, e.src) != e.weight)
                    throw DomainError("Graph: undirected edge set is not symmetric");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Permutations

struct Permutation {
    std::vector<int> map;  // bijection on [0, n)

    explicit Permutation(std::vector<int> m) : map(std::move(m)) {
        std::vector<char> seen(map.size(), 0);
        for (int v : map) {
            if (v < 0 || v >= static_cast<int>(map.size()) || seen[static_cast<std::size_t>(v)])
                throw DomainError("Permutation: map is not a bijection");
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> m(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
        return Permutation(std::move(m));
    }

    static Permutation random(int n, Rng& rng) {
        auto p = identity(n);
        rng.shuffle(p.map);
        return p;
    }

    int size() const { return static_cast<int>(map.size()); }

    Permutation inverse() const {
        std::vector<int> inv(map.size());
        for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] = i;
        return Permutation(std::move(inv));
    }
};

// ---------------------------------------------------------------------------
// Constructors

// Directed cycle whose dense form is the DSP circular-shift matrix.
inline Graph ring_graph(int n) {
    if (n < 1) throw DomainError("ring_graph: vertex count must be positive");
    std::vector<EdgeTriple> e;
    e.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
    return Graph(n, true, std::move(e));
}

inline Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("erdos_renyi: probability outside [0, 1]");
    if (n < 0) throw DomainError("erdos_renyi: negative vertex count");
    Rng rng(seed);
    std::vector<EdgeTriple> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) pairs.push_back({i, j, 1.0});
    return Graph::from_undirected_pairs(n, pairs);
}

// Stochastic block model with block-constant edge probabilities.
inline std::pair<Graph, std::vector<int>> sbm(const std::vector<int>& class_sizes, double p_in,
                                              double p_out, std::uint64_t seed) {
    if (class_sizes.empty()) throw DomainError("sbm: class_sizes must be nonempty");
    if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0))
        throw DomainError("sbm: probability outside [0, 1]");
    std::vector<int> labels;
    for (std::size_t c = 0; c < class_sizes.size(); ++c) {
        if (class_sizes[c] < 0) throw DomainError("sbm: negative class size");
        for (int k = 0; k < class_sizes[c]; ++k) labels.push_back(static_cast<int>(c));
    }
    int n = static_cast<int>(labels.size());
    Rng rng(seed);
    std::vector<EdgeTriple> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double p = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? p_in : p_out;
            if (rng.uniform() < p) pairs.push_back({i, j, 1.0});
        }
    return {Graph::from_undirected_pairs(n, pairs), std::move(labels)};
}

// ---------------------------------------------------------------------------
// Structural statistics and transforms

// D[i] = sum_j A[i][j]: row sums of the dense adjacency, i.e. total weight
// of edges whose head is i. For undirected graphs this is the usual degree.
inline std::vector<double> degree_matrix(const Graph& g) {
    std::vector<double> d(static_cast<std::size_t>(g.num_nodes()), 0.0);
    for (const auto& e : g.edges()) d[static_cast<std::size_t>(e.dst)] += e.weight;
    return d;
}

inline double average_degree(const Graph& g) {
    if (g.num_nodes() == 0) return 0.0;
    auto d = degree_matrix(g);
    double s = 0.0;
    for (double v : d) s += v;
    return s / static_cast<double>(g.num_nodes());
}

// w_ij / sqrt(d_i d_j); isolated nodes keep zero rows/columns (0/0 := 0).
inline Graph normalize_sym(const Graph& g) {
    if (g.directed()) throw DomainError("normalize_sym: unsupported on directed graphs");
    auto d = degree_matrix(g);
    std::vector<EdgeTriple> out;
    out.reserve(g.edges().size());
    for (const auto& e : g.edges()) {
        double prod = d[static_cast<std::size_t>(e.src)] * d[static_cast<std::size_t>(e.dst)];
        double w = prod > 0.0 ? e.weight / std::sqrt(prod) : 0.0;
        if (w != 0.0) out.push_back({e.src, e.dst, w});
    }
    return Graph(g.num_nodes(), false, std::move(out));
}

inline Graph add_self_loops(const Graph& g, double loop_weight = 1.0) {
    std::vector<EdgeTriple> trip = g.edges();
    for (int i = 0; i < g.num_nodes(); ++i) trip.push_back({i, i, loop_weight});
    return Graph(g.num_nodes(), g.directed(), std::move(trip));
}

inline Graph permute(const Graph& g, const Permutation& p) {
    if (p.size() != g.num_nodes()) throw ShapeError("permute: permutation length != vertex count");
    auto pinv = p.inverse();
    std::vector<EdgeTriple> trip;
    trip.reserve(g.edges().size());
    for (const auto& e : g.edges())
        trip.push_back({pinv.map[static_cast<std::size_t>(e.src)], pinv.map[static_cast<std::size_t>(e.dst)], e.weight});
    return Graph(g.num_nodes(), g.directed(), std::move(trip));
}

// Row i of the result is row p[i] of the input.
inline Tensor permute_signal(const Tensor& x, const Permutation& p) {
    if (p.size() != x.rows) throw ShapeError("permute_signal: permutation length != rows");
    Tensor y(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) y.at(i, j) = x.at(p.map[static_cast<std::size_t>(i)], j);
    return y;
}

// Longest shortest-path length (unweighted, respecting direction); nullopt
// when some ordered pair is unreachable.
inline std::optional<int> diameter(const Graph& g) {
    int n = g.num_nodes();
    if (n <= 1) return 0;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges())
        if (e.src != e.dst) adj[static_cast<std::size_t>(e.src)].push_back(e.dst);
    int best = 0;
    std::vector<int> dist(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[static_cast<std::size_t>(u)])
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
        }
        for (int v = 0; v < n; ++v) {
            if (dist[static_cast<std::size_t>(v)] < 0) return std::nullopt;
            best = std::max(best, dist[static_cast<std::size_t>(v)]);
        }
    }
    return best;
}

// Node-induced subgraph; idx must be strictly increasing. Node i of the
// result corresponds to idx[i] of the input.
inline Graph induced_subgraph(const Graph& g, const std::vector<int>& idx) {
    std::vector<int> where(static_cast<std::size_t>(g.num_nodes()), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        int v = idx[i];
        if (v < 0 || v >= g.num_nodes()) throw DomainError("induced_subgraph: index out of range");
        if (i > 0 && idx[i] <= idx[i - 1]) throw DomainError("induced_subgraph: indices must be strictly increasing");
        where[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    std::vector<EdgeTriple> trip;
    for (const auto& e : g.edges()) {
        int s = where[static_cast<std::size_t>(e.src)];
        int d = where[static_cast<std::size_t>(e.dst)];
        if (s >= 0 && d >= 0) trip.push_back({s, d, e.weight});
    }
    return Graph(static_cast<int>(idx.size()), g.directed(), std::move(trip));
}

// y = A * x via sparse multiply; x is (n x C).
inline Tensor shift(const Graph& g, const Tensor& x) {
    if (x.rows != g.num_nodes()) throw ShapeError("shift: signal rows != vertex count");
    Tensor y(x.rows, x.cols);
    for (const auto& e : g.edges()) {
        const double w = e.weight;
        const std::size_t src = static_cast<std::size_t>(e.src) * x.cols;
        const std::size_t dst = static_cast<std::size_t>(e.dst) * x.cols;
        for (int c = 0; c < x.cols; ++c) y.data[dst + c] += w * x.data[src + c];
    }
    return y;
}

// y = A^T * x; the adjoint of shift (used by backpropagation).
inline Tensor shift_transpose(const Graph& g, const Tensor& x) {
    if (x.rows != g.num_nodes()) throw ShapeError("shift_transpose: signal rows != vertex count");
    Tensor y(x.rows, x.cols);
    for (const auto& e : g.edges()) {
        const double w = e.weight;
        const std::size_t src = static_cast<std::size_t>(e.src) * x.cols;
        const std::size_t dst = static_cast<std::size_t>(e.dst) * x.cols;
        for (int c = 0; c < x.cols; ++c) y.data[src + c] += w * x.data[dst + c];
    }
    return y;
}

}  // namespace gcnn
