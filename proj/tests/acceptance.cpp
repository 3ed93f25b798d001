// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every tolerance and threshold is pinned here in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gcnn/checkpoint.hpp"
#include "gcnn/entropy.hpp"
#include "gcnn/gsp.hpp"
#include "gcnn/model.hpp"
#include "gcnn/pooling.hpp"
#include "gcnn/stats.hpp"
#include "gcnn/train.hpp"
#include "helpers.hpp"

using namespace gcnn;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

void run_criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget_seconds) {
        c.ok = false;
        if (c.detail.empty()) c.detail = "runtime budget exceeded";
    }
    std::printf("[%s] %d. %s (%.1fs)%s%s\n", c.ok ? "PASS" : "FAIL", number, name.c_str(), elapsed,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++g_failures;
}

double fd_check(Tensor& param, const std::function<double()>& f, const std::vector<double>& analytic) {
    auto numeric = testutil::finite_diff(param, f);
    return testutil::max_rel_err(analytic, numeric);
}

// --------------------------------------------------------------------------
// Criterion bodies

void gsp_correctness(Check& c) {
    Rng rng(1001);
    // permutation equivariance at 1e-10 on 100 random cases
    for (int it = 0; it < 100; ++it) {
        int n = 3 + static_cast<int>(rng.below(14));
        auto g = it % 2 == 0 ? testutil::random_undirected(n, 0.5, rng)
                             : testutil::random_directed(n, 0.4, rng);
        auto p = Permutation::random(n, rng);
        std::vector<double> alpha;
        for (int k = 0; k <= std::min(3, n - 1); ++k) alpha.push_back(rng.uniform(-1.0, 1.0));
        FilterCoeffs fc(alpha);
        auto x = testutil::random_tensor(n, 2, rng);
        auto lhs = poly_filter(permute(g, p), fc, permute_signal(x, p));
        auto rhs = permute_signal(poly_filter(g, fc, x), p);
        c.expect(max_abs_diff(lhs, rhs) < 1e-10, "permutation equivariance above 1e-10");
    }
    // vertex/spectral duality at 1e-8 on unflagged graphs up to n = 30
    int tested = 0;
    while (tested < 30) {
        int n = 2 + static_cast<int>(rng.below(29));
        auto g = tested % 2 == 0 ? testutil::random_undirected(n, 0.4, rng)
                                 : testutil::random_directed(n, 0.35, rng);
        auto s = spectrum(g);
        if (s.repeated_warning) continue;
        std::vector<double> alpha;
        for (int k = 0; k <= std::min(3, n - 1); ++k) alpha.push_back(rng.uniform(-1.0, 1.0));
        FilterCoeffs fc(alpha);
        auto x = testutil::random_tensor(n, 2, rng);
        c.expect(max_abs_diff(spectral_filter(s, fc, x), poly_filter(g, fc, x)) < 1e-8,
                 "vertex/spectral duality above 1e-8");
        ++tested;
    }
    // ring reduction: circular shift and roots-of-unity spectrum at 1e-8
    for (int n : {2, 4, 8, 16}) {
        auto g = ring_graph(n);
        auto x = testutil::random_tensor(n, 1, rng);
        auto shifted = shift(g, x);
        for (int i = 0; i < n; ++i)
            c.expect(shifted.at(i, 0) == x.at((i - 1 + n) % n, 0), "ring shift is not the delay");
        auto s = spectrum(g);
        auto viaspec = spectral_filter(s, FilterCoeffs({0.0, 1.0}), x);
        c.expect(max_abs_diff(viaspec, shifted) < 1e-8, "spectral shift differs from the delay");
        for (int k = 0; k < n; ++k) {
            std::complex<double> root(std::cos(2.0 * M_PI * k / n), -std::sin(2.0 * M_PI * k / n));
            double best = 1e9;
            for (const auto& ev : s.eigenvalues) best = std::min(best, std::abs(ev - root));
            c.expect(best < 1e-8, "ring eigenvalue misses a root of unity");
        }
    }
}

void autodiff_suite(Check& c) {
    Rng rng(2002);
    // primitives: weighted-sum VJP against central differences
    auto weighted = [&](Tensor& param, const std::function<int(Tape&, int)>& op, double tol) {
        Tensor r;
        param.requires_grad = true;
        param.zero_grad();
        {
            Tape t;
            int out = op(t, t.leaf(&param));
            const Tensor& ov = t.value(out);
            r = testutil::random_tensor(ov.rows, ov.cols, rng);
            int loss = t.sum_all(t.hadamard(out, t.constant(r)));
            t.backward(loss);
        }
        auto f = [&]() {
            Tape t;
            int out = op(t, t.leaf(&param));
            return t.value(t.sum_all(t.hadamard(out, t.constant(r)))).data[0];
        };
        c.expect(fd_check(param, f, param.grad) < tol, "primitive gradient above tolerance");
    };

    int n = 5, m = 3;
    auto g = testutil::random_undirected(n, 0.6, rng);
    Tensor other = testutil::random_tensor(n, m, rng);
    Tensor gate = testutil::random_tensor(n, 1, rng);
    {
        Tensor x = testutil::random_tensor(n, m, rng);
        weighted(x, [&](Tape& t, int p) { return t.add(p, t.constant(other)); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.scale(p, -0.7); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.add_scalar(p, 1.3); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.matmul(p, t.constant(Tensor::identity(m))); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.sparse_matmul(g, p); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.transpose(p); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.hadamard(p, t.constant(other)); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.relu(p); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.tanh_op(p); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.softmax_rows(p); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.concat_cols({p, t.constant(other)}); }, 1e-4);
        for (Reduce k : {Reduce::mean, Reduce::sum, Reduce::max, Reduce::var})
            weighted(x, [&, k](Tape& t, int p) { return t.reduce(p, k); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.sum_all(p); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.gather_rows(p, {0, 2, 2, -1}); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.scale_rows(p, t.constant(gate)); }, 1e-4);
        weighted(x, [&](Tape& t, int p) { return t.reshape(p, 1, n * m); }, 1e-4);
        weighted(x, [&](Tape& t, int p) {
            Rng mask(99);
            return t.dropout(p, 0.4, mask, true);
        }, 1e-4);
    }
    {
        Tensor pos(n, m);
        for (auto& v : pos.data) v = 0.5 + rng.uniform();
        weighted(pos, [&](Tape& t, int p) { return t.log_op(p); }, 1e-4);
        weighted(pos, [&](Tape& t, int p) { return t.sqrt_op(p); }, 1e-4);
        weighted(pos, [&](Tape& t, int p) { return t.rsqrt_op(p); }, 1e-4);
        weighted(pos, [&](Tape& t, int p) { return t.xlogx(p); }, 1e-4);
        Tensor col_gate = testutil::random_tensor(m, 1, rng);
        weighted(col_gate, [&](Tape& t, int p) { return t.scale_cols(t.constant(other), p); }, 1e-4);
        Tensor vec = testutil::random_tensor(m, 1, rng);
        weighted(vec, [&](Tape& t, int p) { return t.normalize_l2(p); }, 1e-4);
    }
    {
        Tensor logits = testutil::random_tensor(6, 4, rng);
        logits.requires_grad = true;
        logits.zero_grad();
        std::vector<int> labels = {0, 3, 1, 2, 0, 1};
        std::vector<char> mask = {1, 1, 0, 1, 1, 1};
        {
            Tape t;
            t.backward(t.cross_entropy(t.leaf(&logits), labels, mask));
        }
        auto f = [&]() {
            Tape t;
            return t.value(t.cross_entropy(t.leaf(&logits), labels, mask)).data[0];
        };
        c.expect(fd_check(logits, f, logits.grad) < 1e-4, "cross_entropy gradient above 1e-4");
    }

    // both conv layers inside full node models at 1e-4
    for (ConvVariant variant : {ConvVariant::gcn, ConvVariant::tagcn}) {
        auto gg = testutil::random_undirected(8, 0.5, rng);
        auto x = testutil::random_tensor(8, 3, rng);
        std::vector<int> labels = {0, 1, 2, 0, 1, 2, 0, 1};
        std::vector<char> mask(8, 1);
        ModelSpec spec;
        spec.task = TaskKind::node;
        spec.layers = {{variant, 2, 5}, {variant, 2, 3}};
        spec.dropout = 0.0;
        auto model = build_model(spec, 3, 3, 4242);
        auto sup = make_supports(gg, spec);
        auto loss_of = [&]() {
            Tape t;
            Rng r(1);
            return t.value(t.cross_entropy(forward_node(t, model, sup, x, false, r), labels, mask)).data[0];
        };
        model.zero_grads();
        {
            Tape t;
            Rng r(1);
            t.backward(t.cross_entropy(forward_node(t, model, sup, x, false, r), labels, mask));
        }
        for (auto& p : model.parameters())
            c.expect(fd_check(*p.tensor, loss_of, p.tensor->grad) < 1e-4,
                     std::string("conv model gradient above 1e-4 at ") + p.name);
    }

    // pooling parameters at 1e-3
    {
        auto gg = testutil::random_undirected(7, 0.6, rng);
        auto x = testutil::random_tensor(7, 3, rng);
        for (PoolMethod pm : {PoolMethod::topk, PoolMethod::sagpool, PoolMethod::diffpool}) {
            ModelSpec spec;
            spec.task = TaskKind::graph;
            spec.layers = {{ConvVariant::gcn, 1, 4}, {ConvVariant::gcn, 1, 4}};
            spec.dropout = 0.0;
            spec.pooling = pm;
            spec.pool_ratio = 0.6;
            spec.diffpool_clusters = 3;
            auto model = build_model(spec, 3, 2, 77);
            auto sup = make_supports(gg, spec);
            auto loss_of = [&]() {
                Tape t;
                Rng r(1);
                auto fw = forward_graph(t, model, sup, x, nullptr, false, r);
                int l = t.cross_entropy(fw.logits, {1}, {1});
                for (auto& [name, var] : fw.aux_losses) l = t.add(l, var);
                return t.value(l).data[0];
            };
            model.zero_grads();
            {
                Tape t;
                Rng r(1);
                auto fw = forward_graph(t, model, sup, x, nullptr, false, r);
                int l = t.cross_entropy(fw.logits, {1}, {1});
                for (auto& [name, var] : fw.aux_losses) l = t.add(l, var);
                t.backward(l);
            }
            for (auto& p : model.parameters()) {
                if (p.name.rfind("pool.", 0) != 0) continue;
                c.expect(fd_check(*p.tensor, loss_of, p.tensor->grad) < 1e-3,
                         std::string("pooling gradient above 1e-3 at ") + p.name);
            }
        }
    }
}

void algebraic_identities(Check& c) {
    Rng rng(3003);
    for (int it = 0; it < 10; ++it) {
        int n = 4 + static_cast<int>(rng.below(12));
        auto g = testutil::random_undirected(n, 0.5, rng, /*weighted=*/false);
        auto x = testutil::random_tensor(n, 3, rng);
        Tensor w = testutil::random_tensor(3, 4, rng);

        // GCN == TAGCN(K=1, tied W) with matched supports, to 1e-12
        auto sg = gcn_support(g);
        Tensor wg = w;
        Tape ta;
        int lhs = gcn_forward(ta, wg, sg, ta.constant(x), Act::relu);
        std::vector<Tensor> tied = {w, w};
        Tape tb;
        int rhs = tagcn_forward(tb, tied, add_self_loops(sg, -1.0), tb.constant(x), Act::relu);
        c.expect(max_abs_diff(ta.value(lhs), tb.value(rhs)) < 1e-12,
                 "GCN vs TAGCN(K=1) above 1e-12");

        // TAGCN(K=0) == dense layer, exactly
        std::vector<Tensor> w0 = {w};
        Tape tc;
        int t0 = tagcn_forward(tc, w0, g, tc.constant(x), Act::none);
        Tape td;
        int dense = td.matmul(td.constant(x), td.constant(w));
        c.expect(max_abs_diff(tc.value(t0), td.value(dense)) == 0.0, "TAGCN(K=0) differs from dense");
    }
}

void edge_entropy_criterion(Check& c) {
    Rng rng(4004);
    // matrix powers vs exhaustive enumeration on <= 8-node graphs, n <= 3
    for (int it = 0; it < 25; ++it) {
        int n = 2 + static_cast<int>(rng.below(7));
        auto g = it % 2 == 0 ? testutil::random_undirected(n, 0.5, rng)
                             : testutil::random_directed(n, 0.4, rng);
        std::vector<int> labels;
        for (int v = 0; v < n; ++v) labels.push_back(static_cast<int>(rng.below(2)));
        labels[0] = 0;
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (const auto& e : g.edges())
            if (e.weight > 0.0) adj[static_cast<std::size_t>(e.src)].push_back(e.dst);
        for (int order = 1; order <= 3; ++order) {
            Tensor counts(2, 2);
            std::function<void(int, int, int)> walk = [&](int start, int at, int left) {
                if (left == 0) {
                    counts.at(labels[static_cast<std::size_t>(start)], labels[static_cast<std::size_t>(at)]) += 1.0;
                    return;
                }
                for (int nb : adj[static_cast<std::size_t>(at)]) walk(start, nb, left - 1);
            };
            for (int v = 0; v < n; ++v) walk(v, v, order);
            std::vector<bool> defined;
            auto p = interclass_probability(g, labels, order, &defined);
            for (int i = 0; i < 2; ++i) {
                double total = counts.at(i, 0) + counts.at(i, 1);
                if (total == 0.0) {
                    c.expect(!defined[static_cast<std::size_t>(i)], "undefined row not flagged");
                } else {
                    for (int j = 0; j < 2; ++j)
                        c.expect(std::abs(p.at(i, j) - counts.at(i, j) / total) < 1e-12,
                                 "walk counting differs from enumeration");
                }
            }
        }
    }
    // H = 0 for perfect homophily; H = 1 for uniform rows (1e-9)
    {
        auto cliques = sbm({4, 4}, 1.0, 0.0, 5).first;
        std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
        auto rep = edge_entropy(cliques, labels, 1);
        for (const auto& h : rep.h) c.expect(h && std::abs(*h) < 1e-9, "homophily entropy not 0");

        std::vector<EdgeTriple> pairs;
        for (int i = 0; i < 4; ++i) {
            pairs.push_back({i, i, 1.0});
            for (int j = i + 1; j < 4; ++j) pairs.push_back({i, j, 1.0});
        }
        auto uniform = Graph::from_undirected_pairs(4, pairs);
        auto urep = edge_entropy(uniform, {0, 0, 1, 1}, 1);
        for (const auto& h : urep.h) c.expect(h && std::abs(*h - 1.0) < 1e-9, "uniform entropy not 1");
    }
    // SBM monotonicity over 5 ratio levels x 10 seeds
    {
        std::vector<double> xs, ys;
        std::uint64_t seed = 900;
        for (double ratio : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            for (int i = 0; i < 10; ++i) {
                auto [g, labels] = sbm({40, 40}, 0.02 * ratio, 0.02, seed++);
                auto h = mean_entropy(edge_entropy(g, labels, 1));
                c.expect(h.has_value(), "SBM entropy undefined");
                xs.push_back(ratio);
                ys.push_back(h.value_or(1.0));
            }
        }
        double rho = spearman_rho(xs, ys);
        double p = spearman_perm_pvalue_neg(xs, ys);
        c.expect(rho < 0.0, "Spearman rho not negative");
        c.expect(p < 0.01, "Spearman p-value not below 0.01");
    }
}

ExperimentConfig sbm_acceptance_cfg() {
    ExperimentConfig cfg;
    cfg.task = TaskKind::node;
    cfg.synthetic = "sbm";
    cfg.sbm_sizes = {100, 100, 100, 100};
    cfg.sbm_p_in = 0.10;
    cfg.sbm_p_out = 0.005;
    cfg.feature_flip = 0.3;
    cfg.train_per_class = 20;
    cfg.val_per_class = 20;
    cfg.depth = 2;
    cfg.hidden = 16;
    cfg.dropout = 0.5;
    cfg.lr = 0.01;
    cfg.weight_decay = 5e-4;
    cfg.epochs = 200;
    cfg.patience = 10;
    cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.data_seed = 1;
    return cfg;
}

void structure_effectiveness(Check& c) {
    auto cfg = sbm_acceptance_cfg();
    // full training budget: this criterion compares what the structures are
    // worth at convergence, not how fast each variant optimizes
    cfg.patience = 0;
    auto ds = resolve_node_dataset(cfg);
    auto rep = effectiveness_probe(ds, cfg);
    double true_a = rep.rows[0].acc.mean;
    double identity = rep.rows[1].acc.mean;
    double er = rep.rows[2].acc.mean;
    std::ostringstream note;
    note << "true_A=" << true_a << " identity=" << identity << " er=" << er;
    c.expect(true_a >= identity + 0.10, "true A does not beat identity by 0.10: " + note.str());
    c.expect(true_a >= er + 0.10, "true A does not beat ER by 0.10: " + note.str());
}

void depth_guidance(Check& c) {
    auto cfg = sbm_acceptance_cfg();
    auto ds = resolve_node_dataset(cfg);
    ExperimentConfig c2 = cfg, c4 = cfg;
    c2.depth = 2;
    c4.depth = 4;
    double acc2 = summarize(train_node(ds, c2)).mean;
    double acc4 = summarize(train_node(ds, c4)).mean;
    std::ostringstream note;
    note << "depth2=" << acc2 << " depth4=" << acc4;
    c.expect(acc2 >= acc4, "depth-2 below depth-4: " + note.str());
}

void graph_classification_gates(Check& c) {
    {
        ExperimentConfig cfg;
        cfg.task = TaskKind::graph;
        cfg.synthetic = "ring_vs_er";
        cfg.graphs_per_class = 50;
        cfg.min_nodes = 12;
        cfg.max_nodes = 24;
        cfg.data_seed = 1;
        cfg.depth = 2;
        cfg.hidden = 16;
        cfg.dropout = 0.0;
        cfg.readout = {ReadoutStat::mean};
        cfg.head_hidden = 32;
        cfg.epochs = 100;
        cfg.patience = 20;
        cfg.batch_size = 32;
        cfg.folds = 10;
        cfg.seeds = {1};
        auto ds = resolve_graph_dataset(cfg);
        double acc = summarize(train_graph(ds, cfg)).mean;
        c.expect(acc >= 0.95, "ring-vs-er mean CV accuracy " + std::to_string(acc) + " below 0.95");
    }
    // MUTAG gate runs only when the files are supplied
    fs::path mutag = fs::path(GCNN_SOURCE_DIR) / "data" / "MUTAG";
    bool have_mutag = fs::exists(mutag / "MUTAG_A.txt") || fs::exists(mutag / "A.txt");
    if (!have_mutag) {
        std::printf("       (MUTAG files not supplied under data/MUTAG; that gate is skipped)\n");
        return;
    }
    ExperimentConfig cfg;
    cfg.task = TaskKind::graph;
    cfg.data_dir = mutag.string();
    cfg.conv = ConvVariant::tagcn;
    cfg.tagcn_k = 3;
    cfg.depth = 2;
    cfg.hidden = 16;
    cfg.dropout = 0.0;
    cfg.readout = {ReadoutStat::mean, ReadoutStat::var};
    cfg.head_hidden = 32;
    cfg.epochs = 100;
    cfg.patience = 20;
    cfg.batch_size = 32;
    cfg.folds = 10;
    cfg.seeds = {1};
    auto ds = resolve_graph_dataset(cfg);
    double acc = summarize(train_graph(ds, cfg)).mean;
    c.expect(acc >= 0.80, "MUTAG mean 10-fold accuracy " + std::to_string(acc) + " below 0.80");
}

void pooling_contracts(Check& c) {
    Rng rng(8008);
    // N' = ceil(ratio * N); A' symmetry <= 1e-12
    for (double ratio : {0.25, 0.5, 0.8, 1.0}) {
        int n = 6 + static_cast<int>(rng.below(8));
        auto g = testutil::random_undirected(n, 0.5, rng);
        auto x = testutil::random_tensor(n, 3, rng);
        Tensor p = testutil::random_tensor(3, 1, rng);
        Tape t;
        auto res = topk_pool(t, g, t.constant(x), ratio, &p);
        c.expect(static_cast<int>(res.kept.size()) == static_cast<int>(std::ceil(ratio * n)),
                 "kept count differs from ceil(ratio*N)");
        auto a = res.reduced_graph->dense();
        int rn = res.reduced_graph->num_nodes();
        for (int i = 0; i < rn; ++i)
            for (int j = 0; j < rn; ++j)
                c.expect(std::abs(a[static_cast<std::size_t>(i) * rn + j] -
                                  a[static_cast<std::size_t>(j) * rn + i]) <= 1e-12,
                         "pooled adjacency asymmetric");
    }
    // DiffPool aux-loss bounds
    {
        auto g = testutil::random_undirected(8, 0.6, rng);
        auto sup = gcn_support(g);
        auto x = testutil::random_tensor(8, 3, rng);
        GcnLayer assign{glorot_uniform(3, 3, rng)};
        GcnLayer embed{glorot_uniform(3, 3, rng)};
        Tape t;
        auto res = diff_pool(t, g, t.constant(x), assign, embed, sup, 3);
        int rn = 3;
        const Tensor ar = t.value(res.reduced_dense);
        for (int i = 0; i < rn; ++i)
            for (int j = 0; j < rn; ++j)
                c.expect(std::abs(ar.at(i, j) - ar.at(j, i)) <= 1e-12, "DiffPool A' asymmetric");
        for (auto& [name, var] : res.aux_losses) {
            double v = t.value(var).data[0];
            c.expect(v >= 0.0, name + " aux loss negative");
            if (name == "entropy") c.expect(v <= std::log(3.0) + 1e-12, "entropy above log(clusters)");
        }
    }
    // every method trains end to end on the toy dataset
    ExperimentConfig cfg;
    cfg.task = TaskKind::graph;
    cfg.data_dir = (fs::path(GCNN_SOURCE_DIR) / "data" / "fixtures" / "tu_toy8").string();
    cfg.depth = 2;
    cfg.hidden = 8;
    cfg.dropout = 0.0;
    cfg.epochs = 10;
    cfg.patience = 0;
    cfg.folds = 2;
    cfg.batch_size = 4;
    cfg.head_hidden = 8;
    cfg.diffpool_clusters = 2;
    cfg.sortpool_k = 3;
    cfg.pool_ratio = 0.5;
    cfg.seeds = {1};
    for (PoolMethod pm : {PoolMethod::none, PoolMethod::topk, PoolMethod::sagpool, PoolMethod::sortpool,
                          PoolMethod::diffpool}) {
        ExperimentConfig one = cfg;
        one.pooling = pm;
        auto ds = resolve_graph_dataset(one);
        try {
            auto runs = train_graph(ds, one);
            c.expect(runs.size() == 2, "unexpected run count");
        } catch (const NumericError& e) {
            c.expect(false, std::string("numeric-health error while training: ") + e.what());
        }
    }
}

void determinism(Check& c) {
    fs::path work = fs::temp_directory_path() / "gcnn_acceptance_determinism";
    fs::remove_all(work);
    fs::create_directories(work);
    fs::path cfgfile = work / "exp.cfg";
    {
        std::ofstream out(cfgfile);
        out << "task = node\nsynthetic = sbm\nsbm_sizes = 30,30\nsbm_p_in = 0.3\nsbm_p_out = 0.02\n";
        out << "feature_flip = 0.3\ntrain_per_class = 6\nval_per_class = 6\nhidden = 8\nepochs = 25\n";
        out << "patience = 0\nseeds = 5,6\n";
    }
    auto run_cli = [&](const std::string& args, const fs::path& out_dir) {
        std::string cmd = std::string(GCNN_CLI_PATH) + " " + args + " --out " + out_dir.string() +
                          " > " + (out_dir.string() + ".log") + " 2>&1";
        return std::system(cmd.c_str());
    };
    auto bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    // train-node twice with identical config + seed
    c.expect(run_cli("train-node --config " + cfgfile.string() + " --seed 7", work / "a") == 0,
             "train-node run 1 failed");
    c.expect(run_cli("train-node --config " + cfgfile.string() + " --seed 7", work / "b") == 0,
             "train-node run 2 failed");
    for (const char* f : {"metrics_7.csv", "summary.csv", "model_7.ckpt"})
        c.expect(bytes(work / "a" / f) == bytes(work / "b" / f),
                 std::string("train-node output differs: ") + f);

    // synth twice
    c.expect(run_cli("synth --config " + cfgfile.string(), work / "s1") == 0, "synth run 1 failed");
    c.expect(run_cli("synth --config " + cfgfile.string(), work / "s2") == 0, "synth run 2 failed");
    for (const char* f : {"edges.txt", "features.csv", "labels.txt", "split.txt"})
        c.expect(bytes(work / "s1" / f) == bytes(work / "s2" / f), std::string("synth differs: ") + f);

    // entropy twice on the written dataset
    c.expect(run_cli("entropy --data-dir " + (work / "s1").string() + " --order 2", work / "e1") == 0,
             "entropy run 1 failed");
    c.expect(run_cli("entropy --data-dir " + (work / "s1").string() + " --order 2", work / "e2") == 0,
             "entropy run 2 failed");
    for (const char* f : {"entropy.csv", "p_matrix.csv"})
        c.expect(bytes(work / "e1" / f) == bytes(work / "e2" / f), std::string("entropy differs: ") + f);

    // spectrum-report twice
    c.expect(run_cli("spectrum-report --ring 12", work / "r1") == 0, "spectrum run 1 failed");
    c.expect(run_cli("spectrum-report --ring 12", work / "r2") == 0, "spectrum run 2 failed");
    c.expect(bytes(work / "r1" / "spectrum.csv") == bytes(work / "r2" / "spectrum.csv"),
             "spectrum output differs");

    // a missing dataset directory is a data error (exit code 2)
    {
        std::string cmd = std::string(GCNN_CLI_PATH) + " entropy --data-dir " +
                          (work / "definitely_missing").string() + " --out " + (work / "x").string() +
                          " > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 2, "missing dataset dir did not exit 2");
    }

    // train-graph twice (small synthetic config)
    fs::path gcfg = work / "graph.cfg";
    {
        std::ofstream out(gcfg);
        out << "task = graph\nsynthetic = ring_vs_er\ngraphs_per_class = 8\nmin_nodes = 8\nmax_nodes = 12\n";
        out << "depth = 2\nhidden = 8\ndropout = 0\nepochs = 8\npatience = 0\nfolds = 2\nbatch_size = 4\n";
        out << "head_hidden = 8\nseeds = 3\n";
    }
    c.expect(run_cli("train-graph --config " + gcfg.string(), work / "g1") == 0, "train-graph run 1 failed");
    c.expect(run_cli("train-graph --config " + gcfg.string(), work / "g2") == 0, "train-graph run 2 failed");
    for (const char* f : {"metrics_3_fold0.csv", "metrics_3_fold1.csv", "summary.csv"})
        c.expect(bytes(work / "g1" / f) == bytes(work / "g2" / f),
                 std::string("train-graph output differs: ") + f);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "GSP correctness (equivariance, duality, ring reduction)", 30.0, gsp_correctness);
    run_criterion(2, "autodiff finite-difference suite", 60.0, autodiff_suite);
    run_criterion(3, "algebraic identities (GCN/TAGCN)", 30.0, algebraic_identities);
    run_criterion(4, "edge entropy (oracle, bounds, SBM monotonicity)", 60.0, edge_entropy_criterion);
    run_criterion(5, "structure effectiveness (adjacency vs identity vs random)", 300.0,
                  structure_effectiveness);
    run_criterion(6, "depth guidance (2 layers vs 4 layers)", 300.0, depth_guidance);
    run_criterion(7, "graph classification gates (ring-vs-er, MUTAG when supplied)", 600.0,
                  graph_classification_gates);
    run_criterion(8, "pooling contracts and end-to-end training", 120.0, pooling_contracts);
    run_criterion(9, "CLI determinism (byte-identical outputs)", 120.0, determinism);
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
