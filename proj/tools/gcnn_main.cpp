// Command-line harness: training runs, sweeps, entropy and spectrum reports,
// synthetic dataset generation. Every run is reproducible from (config,
// seed); all CSV outputs are byte-stable across identical invocations.
//
// Exit codes: 0 ok, 1 usage/config error, 2 data error, 3 numeric error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "gcnn/checkpoint.hpp"
#include "gcnn/config.hpp"
#include "gcnn/dataset.hpp"
#include "gcnn/entropy.hpp"
#include "gcnn/gsp.hpp"
#include "gcnn/train.hpp"

namespace fs = std::filesystem;
using namespace gcnn;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    std::string out_dir;
    std::string data_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file")->required();
    cmd->add_option("--set", opts.overrides, "override a config key (key=value, repeatable)");
    cmd->add_option("--seed", opts.seed, "replace the config's seed list with this one seed");
    cmd->add_option("--out", opts.out_dir, "override the config's output directory");
    cmd->add_option("--data-dir", opts.data_dir, "root directory of the dataset (overrides the config)");
}

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg = parse_config_file(opts.config_path);
    for (const auto& ov : opts.overrides) apply_override(cfg, ov);
    if (opts.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(opts.seed)};
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (!opts.data_dir.empty()) {
        cfg.data_dir = opts.data_dir;
        cfg.synthetic.clear();
    }
    validate_config(cfg);
    return cfg;
}

fs::path ensure_out(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void print_summary(const std::vector<RunResult>& runs) {
    Summary s = summarize(runs);
    std::printf("runs: %zu  test accuracy: %.4f +/- %.4f\n", runs.size(), s.mean, s.stddev);
}

int cmd_train_node(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts);
    if (cfg.task != TaskKind::node) throw ConfigError("train-node: config task must be node");
    NodeDataset ds = resolve_node_dataset(cfg);
    auto out = ensure_out(cfg.out_dir);
    std::vector<RunResult> runs;
    for (std::uint64_t seed : cfg.seeds) {
        Model best;
        RunResult r = train_node_single(ds, cfg, seed, nullptr, &best);
        csv::write_metrics(out, r);
        save_checkpoint(out / ("model_" + std::to_string(seed) + ".ckpt"), best);
        runs.push_back(std::move(r));
    }
    csv::write_summary(out, runs);
    print_summary(runs);
    return 0;
}

int cmd_train_graph(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts);
    if (cfg.task != TaskKind::graph) throw ConfigError("train-graph: config task must be graph");
    GraphDataset ds = resolve_graph_dataset(cfg);
    auto out = ensure_out(cfg.out_dir);
    auto runs = train_graph(ds, cfg);
    for (const auto& r : runs) csv::write_metrics(out, r);
    csv::write_summary(out, runs);
    print_summary(runs);
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis) {
    ExperimentConfig cfg = load_config(opts);
    auto out = ensure_out(cfg.out_dir);
    if (axis == "structure") {
        if (cfg.task != TaskKind::node) throw ConfigError("sweep: structure axis needs task = node");
        ProbeReport rep = effectiveness_probe(resolve_node_dataset(cfg), cfg);
        csv::write_probe(out, rep);
        for (const auto& row : rep.rows)
            std::printf("%-10s acc %.4f +/- %.4f\n", row.variant.c_str(), row.acc.mean, row.acc.stddev);
        return 0;
    }
    SweepTable table = sweep(cfg, axis);
    csv::write_sweep(out, table);
    for (const auto& row : table.rows)
        std::printf("%s=%-10s acc %.4f +/- %.4f\n", table.axis.c_str(), row.value.c_str(), row.acc.mean,
                    row.acc.stddev);
    return 0;
}

int cmd_entropy(const std::string& data_dir, int order, const std::string& out_dir) {
    NodeDataset ds = load_node_dataset(data_dir);
    EntropyReport rep = edge_entropy(ds.graph, ds.labels, order);
    auto out = ensure_out(out_dir);
    csv::write_entropy(out, rep);
    for (int c = 0; c < rep.num_classes; ++c) {
        const auto& h = rep.h[static_cast<std::size_t>(c)];
        if (h)
            std::printf("class %d  H_%d = %.6f\n", c, order, *h);
        else
            std::printf("class %d  H_%d undefined (no length-%d walks)\n", c, order, order);
    }
    return 0;
}

int cmd_spectrum(const std::string& data_dir, int ring_n, const std::string& out_dir) {
    Graph g;
    if (ring_n > 0) {
        g = ring_graph(ring_n);
    } else if (!data_dir.empty()) {
        g = load_node_dataset(data_dir).graph;
    } else {
        throw ConfigError("spectrum-report: need --data-dir or --ring");
    }
    Spectrum s = spectrum(g);
    auto out = ensure_out(out_dir);
    csv::write_spectrum(out, s);
    std::printf("n = %d  min eigen gap = %.3e  condition estimate = %.3e%s\n", g.num_nodes(),
                s.min_eigen_gap, s.condition_estimate,
                s.repeated_warning ? "  [repeated-spectrum warning]" : "");
    return 0;
}

int cmd_synth(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts);
    auto out = ensure_out(cfg.out_dir);
    if (cfg.synthetic.empty()) throw ConfigError("synth: config must set a synthetic dataset kind");
    if (cfg.task == TaskKind::node) {
        write_node_dataset(out, resolve_node_dataset(cfg));
        std::printf("wrote node dataset to %s\n", out.string().c_str());
    } else {
        write_graph_dataset(out, resolve_graph_dataset(cfg));
        std::printf("wrote graph dataset (TU layout) to %s\n", out.string().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcnn: graph signal processing and graph-CNN experiment harness"};
    app.require_subcommand(1);

    CommonOpts train_node_opts, train_graph_opts, sweep_opts, synth_opts;
    std::string sweep_axis;
    std::string entropy_dir, entropy_out = "out";
    int entropy_order = 1;
    std::string spec_dir, spec_out = "out";
    int spec_ring = 0;

    auto* tn = app.add_subcommand("train-node", "semisupervised node classification");
    add_common(tn, train_node_opts);
    auto* tg = app.add_subcommand("train-graph", "graph classification with k-fold cross-validation");
    add_common(tg, train_graph_opts);
    auto* sw = app.add_subcommand("sweep", "sweep one design axis and tabulate accuracy");
    add_common(sw, sweep_opts);
    sw->add_option("--axis", sweep_axis, "depth|k|pooling|readout|structure")->required();
    auto* en = app.add_subcommand("entropy", "edge-entropy report for a node dataset");
    en->add_option("--data-dir", entropy_dir, "node dataset directory")->required();
    en->add_option("--order", entropy_order, "walk length n (default 1)");
    en->add_option("--out", entropy_out, "output directory");
    auto* sp = app.add_subcommand("spectrum-report", "adjacency eigenvalues as CSV");
    sp->add_option("--data-dir", spec_dir, "node dataset directory");
    sp->add_option("--ring", spec_ring, "use a directed ring graph of this size");
    sp->add_option("--out", spec_out, "output directory");
    auto* sy = app.add_subcommand("synth", "write a synthetic dataset to disk");
    add_common(sy, synth_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (tn->parsed()) return cmd_train_node(train_node_opts);
        if (tg->parsed()) return cmd_train_graph(train_graph_opts);
        if (sw->parsed()) return cmd_sweep(sweep_opts, sweep_axis);
        if (en->parsed()) return cmd_entropy(entropy_dir, entropy_order, entropy_out);
        if (sp->parsed()) return cmd_spectrum(spec_dir, spec_ring, spec_out);
        if (sy->parsed()) return cmd_synth(synth_opts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
