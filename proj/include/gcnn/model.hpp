#pragma once

// Declarative model specs and their realization: a stack of graph
// convolutional layers, an optional pooling stage, aggregation, and a dense
// head. Node-classification models emit per-node logits straight from the
// last conv layer; graph-classification models pool mid-stack (SortPool at
// the end, where it doubles as aggregation) and classify the readout vector.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcnn/aggregation.hpp"
#include "gcnn/autodiff.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/layers.hpp"
#include "gcnn/pooling.hpp"

namespace gcnn {

enum class TaskKind { node, graph };
enum class ConvVariant { gcn, tagcn };
enum class PoolMethod { none, topk, sagpool, sortpool, diffpool };

struct LayerSpec {
    ConvVariant variant = ConvVariant::gcn;
    int k = 1;  // polynomial degree; used by tagcn only
    int width = 16;
};

struct ModelSpec {
    TaskKind task = TaskKind::node;
    std::vector<LayerSpec> layers;
    double dropout = 0.5;
    PoolMethod pooling = PoolMethod::none;
    double pool_ratio = 0.5;
    int sortpool_k = 10;
    int diffpool_clusters = 4;
    std::vector<ReadoutStat> readout = {ReadoutStat::mean};
    bool use_fgsd = false;
    int fgsd_bins = 32;
    double fgsd_range = 4.0;
    std::vector<int> head_hidden;  // hidden widths of the dense head
};

inline void validate_spec(const ModelSpec& spec) {
    if (spec.layers.empty()) throw ConfigError("model spec: at least one conv layer required");
    for (const auto& l : spec.layers) {
        if (l.width < 1) throw ConfigError("model spec: layer width must be positive");
        if (l.variant == ConvVariant::tagcn && l.k < 1)
            throw ConfigError("model spec: tagcn layers need polynomial degree K >= 1");
    }
    if (!(spec.dropout >= 0.0 && spec.dropout < 1.0))
        throw ConfigError("model spec: dropout must lie in [0, 1)");
    if (spec.task == TaskKind::node) {
        if (spec.pooling != PoolMethod::none)
            throw ConfigError("model spec: node classification admits no pooling layer");
    } else {
        if (spec.readout.empty() && spec.pooling != PoolMethod::sortpool)
            throw ConfigError("model spec: graph task needs a readout set");
        if (!(spec.pool_ratio > 0.0 && spec.pool_ratio <= 1.0))
            throw ConfigError("model spec: pool_ratio must lie in (0, 1]");
        if (spec.sortpool_k < 1) throw ConfigError("model spec: sortpool_k must be positive");
        if (spec.diffpool_clusters < 1) throw ConfigError("model spec: diffpool_clusters must be positive");
        if (spec.fgsd_bins < 1) throw ConfigError("model spec: fgsd_bins must be positive");
    }
}

// Hop radius a node's output can see: sum over layers of the per-layer
// degree (1 for GCN, K for TAGCN).
inline int receptive_field(const ModelSpec& spec) {
    int hops = 0;
    for (const auto& l : spec.layers) hops += l.variant == ConvVariant::gcn ? 1 : l.k;
    return hops;
}

// Index (1-based, counting applied conv layers) after which the mid-stack
// pooling stage runs; SortPool runs after the whole stack instead.
inline int pool_position(const ModelSpec& spec) {
    return (static_cast<int>(spec.layers.size()) + 1) / 2;
}

struct NamedParam {
    std::string name;
    Tensor* tensor;
};

struct Model {
    ModelSpec spec;
    int input_dim = 0;
    int n_classes = 0;

    std::vector<std::vector<Tensor>> conv_w;  // per layer: 1 matrix (gcn) or K+1 (tagcn)
    Tensor topk_p;
    GcnLayer sag_scorer;
    GcnLayer dp_assign, dp_embed;
    std::vector<DenseLayer> head;

    std::vector<NamedParam> parameters() {
        std::vector<NamedParam> out;
        for (std::size_t i = 0; i < conv_w.size(); ++i) {
            if (conv_w[i].size() == 1) {
                out.push_back({"conv" + std::to_string(i) + ".W", &conv_w[i][0]});
            } else {
                for (std::size_t k = 0; k < conv_w[i].size(); ++k)
                    out.push_back({"conv" + std::to_string(i) + ".W" + std::to_string(k), &conv_w[i][k]});
            }
        }
        if (spec.pooling == PoolMethod::topk) out.push_back({"pool.p", &topk_p});
        if (spec.pooling == PoolMethod::sagpool) out.push_back({"pool.scorer.W", &sag_scorer.W});
        if (spec.pooling == PoolMethod::diffpool) {
            out.push_back({"pool.assign.W", &dp_assign.W});
            out.push_back({"pool.embed.W", &dp_embed.W});
        }
        for (std::size_t i = 0; i < head.size(); ++i) {
            out.push_back({"head" + std::to_string(i) + ".W", &head[i].W});
            out.push_back({"head" + std::to_string(i) + ".b", &head[i].b});
        }
        return out;
    }

    void zero_grads() {
        for (auto& p : parameters()) p.tensor->zero_grad();
    }
};

inline Model build_model(const ModelSpec& spec, int input_dim, int n_classes, std::uint64_t seed) {
    validate_spec(spec);
    if (input_dim < 1 || n_classes < 1) throw ConfigError("build_model: dimensions must be positive");
    if (spec.task == TaskKind::node && spec.layers.back().width != n_classes)
        throw ConfigError("build_model: final conv width must equal the class count for node tasks");

    Model m;
    m.spec = spec;
    m.input_dim = input_dim;
    m.n_classes = n_classes;
    Rng rng(seed);

    auto fresh = [&rng](int rows, int cols) {
        Tensor w = glorot_uniform(rows, cols, rng);
        w.requires_grad = true;
        return w;
    };

    int cur = input_dim;
    int width_at_pool = 0;
    const int pp = pool_position(spec);
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& l = spec.layers[i];
        std::vector<Tensor> ws;
        const int count = l.variant == ConvVariant::gcn ? 1 : l.k + 1;
        for (int k = 0; k < count; ++k) ws.push_back(fresh(cur, l.width));
        m.conv_w.push_back(std::move(ws));
        cur = l.width;
        if (static_cast<int>(i) + 1 == pp) width_at_pool = cur;
    }

    if (spec.task == TaskKind::graph) {
        switch (spec.pooling) {
            case PoolMethod::topk: m.topk_p = fresh(width_at_pool, 1); break;
            case PoolMethod::sagpool: m.sag_scorer.W = fresh(width_at_pool, 1); break;
            case PoolMethod::diffpool:
                m.dp_assign.W = fresh(width_at_pool, spec.diffpool_clusters);
                m.dp_embed.W = fresh(width_at_pool, width_at_pool);
                break;
            default: break;
        }
        int agg_dim;
        if (spec.pooling == PoolMethod::sortpool) {
            agg_dim = spec.sortpool_k * cur;
        } else {
            std::set<ReadoutStat> uniq(spec.readout.begin(), spec.readout.end());
            agg_dim = static_cast<int>(uniq.size()) * cur;
        }
        if (spec.use_fgsd) agg_dim += spec.fgsd_bins;

        int hin = agg_dim;
        for (int hw : spec.head_hidden) {
            if (hw < 1) throw ConfigError("build_model: head width must be positive");
            DenseLayer d;
            d.W = fresh(hin, hw);
            d.b = Tensor::zeros(1, hw);
            d.b.requires_grad = true;
            m.head.push_back(std::move(d));
            hin = hw;
        }
        DenseLayer out_layer;
        out_layer.W = fresh(hin, n_classes);
        out_layer.b = Tensor::zeros(1, n_classes);
        out_layer.b.requires_grad = true;
        m.head.push_back(std::move(out_layer));
    }
    return m;
}

// Preprocessed supports for one graph, cached once and reused each epoch.
struct Supports {
    Graph raw;
    std::optional<Graph> gcn;    // normalize_sym(A + I)
    std::optional<Graph> tagcn;  // normalize_sym(A) or spectral normalization
};

inline Supports make_supports(const Graph& g, const ModelSpec& spec) {
    Supports s;
    s.raw = g;
    bool need_gcn = spec.pooling == PoolMethod::sagpool || spec.pooling == PoolMethod::diffpool;
    bool need_tagcn = false;
    for (const auto& l : spec.layers) {
        if (l.variant == ConvVariant::gcn) need_gcn = true;
        if (l.variant == ConvVariant::tagcn) need_tagcn = true;
    }
    if (need_gcn) s.gcn = gcn_support(g);
    if (need_tagcn) s.tagcn = tagcn_support(g);
    return s;
}

namespace detail {

struct ConvStage {
    const Supports* sup = nullptr;       // sparse stage
    std::optional<Supports> owned;       // sparse stage after node selection
    int dense_raw = -1;                  // dense stage (post-DiffPool): raw A'
    int dense_gcn = -1;                  // memoized normalized variants
    int dense_tagcn = -1;

    bool is_dense() const { return dense_raw >= 0; }
    const Supports& sparse() const { return owned ? *owned : *sup; }
};

inline int conv_layer_forward(Tape& t, Model& m, ConvStage& stage, std::size_t layer, int x, Act act) {
    const LayerSpec& spec = m.spec.layers[layer];
    if (!stage.is_dense()) {
        const Supports& s = stage.sparse();
        if (spec.variant == ConvVariant::gcn) return gcn_forward(t, m.conv_w[layer][0], *s.gcn, x, act);
        return tagcn_forward(t, m.conv_w[layer], *s.tagcn, x, act);
    }
    if (spec.variant == ConvVariant::gcn) {
        if (stage.dense_gcn < 0)
            stage.dense_gcn = normalize_dense_sym_var(t, add_identity_var(t, stage.dense_raw));
        return gcn_forward_dense(t, m.conv_w[layer][0], stage.dense_gcn, x, act);
    }
    if (stage.dense_tagcn < 0) stage.dense_tagcn = normalize_dense_sym_var(t, stage.dense_raw);
    return tagcn_forward_dense(t, m.conv_w[layer], stage.dense_tagcn, x, act);
}

}  // namespace detail

// Per-node logits (N x M). Dropout applies to every conv layer's input in
// train mode; the final layer emits raw logits for the loss.
inline int forward_node(Tape& t, Model& m, const Supports& sup, const Tensor& features, bool train,
                        Rng& dropout_rng) {
    if (m.spec.task != TaskKind::node) throw ConfigError("forward_node: model is not a node model");
    if (features.cols != m.input_dim) throw ShapeError("forward_node: feature width != input_dim");
    int x = t.constant(features);
    detail::ConvStage stage;
    stage.sup = &sup;
    const std::size_t L = m.spec.layers.size();
    for (std::size_t i = 0; i < L; ++i) {
        x = t.dropout(x, m.spec.dropout, dropout_rng, train);
        Act act = (i + 1 < L) ? Act::relu : Act::none;
        x = detail::conv_layer_forward(t, m, stage, i, x, act);
    }
    return x;
}

struct GraphForward {
    int logits = -1;                                      // (1 x M)
    std::vector<std::pair<std::string, int>> aux_losses;  // DiffPool scalars
    PoolResult pool;                                      // selection / assignment record
    bool pooled = false;
};

// Per-graph logits (1 x M): convs, optional pooling stage, aggregation,
// dense head. fgsd_vec must be supplied when the model spec enables it.
inline GraphForward forward_graph(Tape& t, Model& m, const Supports& sup, const Tensor& features,
                                  const Tensor* fgsd_vec, bool train, Rng& dropout_rng) {
    if (m.spec.task != TaskKind::graph) throw ConfigError("forward_graph: model is not a graph model");
    if (features.cols != m.input_dim) throw ShapeError("forward_graph: feature width != input_dim");
    GraphForward out;
    int x = t.constant(features);
    detail::ConvStage stage;
    stage.sup = &sup;
    const std::size_t L = m.spec.layers.size();
    const bool mid_pool = m.spec.pooling == PoolMethod::topk || m.spec.pooling == PoolMethod::sagpool ||
                          m.spec.pooling == PoolMethod::diffpool;
    const int pp = pool_position(m.spec);

    for (std::size_t i = 0; i < L; ++i) {
        x = t.dropout(x, m.spec.dropout, dropout_rng, train);
        x = detail::conv_layer_forward(t, m, stage, i, x, Act::relu);
        if (mid_pool && static_cast<int>(i) + 1 == pp) {
            const Graph& raw = stage.sparse().raw;
            switch (m.spec.pooling) {
                case PoolMethod::topk:
                    out.pool = topk_pool(t, raw, x, m.spec.pool_ratio, &m.topk_p);
                    break;
                case PoolMethod::sagpool:
                    out.pool = sag_pool(t, raw, x, m.spec.pool_ratio, m.sag_scorer, *stage.sparse().gcn);
                    break;
                case PoolMethod::diffpool:
                    out.pool = diff_pool(t, raw, x, m.dp_assign, m.dp_embed, *stage.sparse().gcn,
                                         m.spec.diffpool_clusters);
                    break;
                default: break;
            }
            out.pooled = true;
            x = out.pool.x;
            out.aux_losses = out.pool.aux_losses;
            if (out.pool.reduced_graph) {
                stage.owned = make_supports(*out.pool.reduced_graph, m.spec);
                stage.sup = nullptr;
            } else {
                stage.dense_raw = out.pool.reduced_dense;
            }
        }
    }

    int v;
    if (m.spec.pooling == PoolMethod::sortpool) {
        out.pool = sort_pool(t, x, m.spec.sortpool_k);
        out.pooled = true;
        const Tensor& xv = t.value(out.pool.x);
        v = t.reshape(out.pool.x, 1, xv.rows * xv.cols);
    } else {
        v = readout(t, x, m.spec.readout);
    }
    if (m.spec.use_fgsd) {
        if (fgsd_vec == nullptr) throw ConfigError("forward_graph: fgsd enabled but no fgsd vector supplied");
        v = t.concat_cols({v, t.constant(*fgsd_vec)});
    }
    out.logits = head_forward(t, m.head, v);
    return out;
}

}  // namespace gcnn
