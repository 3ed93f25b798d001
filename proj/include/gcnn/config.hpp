#pragma once

// Flat key-value experiment configuration: one "key = value" per line, '#'
// comments, lists comma-separated. Unknown keys are errors (the message
// lists every valid key), not warnings.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gcnn/dataset.hpp"
#include "gcnn/errors.hpp"
#include "gcnn/model.hpp"

namespace gcnn {

struct ExperimentConfig {
    TaskKind task = TaskKind::node;
    std::string data_dir;   // exactly one of data_dir / synthetic
    std::string synthetic;  // sbm | ring_vs_er | components
    bool row_normalize = true;
    std::uint64_t data_seed = 1;

    // synthetic: sbm node task
    std::vector<int> sbm_sizes = {100, 100, 100, 100};
    double sbm_p_in = 0.10;
    double sbm_p_out = 0.005;
    double feature_flip = 0.3;
    int train_per_class = 20;
    int val_per_class = 20;

    // synthetic: graph tasks
    int graphs_per_class = 50;
    int min_nodes = 12;
    int max_nodes = 24;

    // model
    ConvVariant conv = ConvVariant::gcn;
    int depth = 2;
    int hidden = 16;
    int tagcn_k = 2;
    double dropout = 0.5;
    PoolMethod pooling = PoolMethod::none;
    double pool_ratio = 0.5;
    int sortpool_k = 10;
    int diffpool_clusters = 4;
    std::vector<ReadoutStat> readout = {ReadoutStat::mean};
    bool fgsd = false;
    int fgsd_bins = 32;
    double fgsd_range = 4.0;
    int head_hidden = 32;  // 0: single dense output layer

    // optimizer and loop
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 5e-4;
    int epochs = 200;
    int patience = 10;  // 0 disables early stopping
    int batch_size = 32;
    int folds = 10;
    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir = "out";
};

namespace cfgdetail {

inline double to_real(const std::string& v, const std::string& key) {
    std::size_t used = 0;
    double x;
    try {
        x = std::stod(v, &used);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    return x;
}

inline long to_int(const std::string& v, const std::string& key) {
    std::size_t used = 0;
    long x;
    try {
        x = std::stol(v, &used);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    return x;
}

inline bool to_flag(const std::string& v, const std::string& key) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' expects on|off, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : v) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline ReadoutStat parse_readout(const std::string& v) {
    if (v == "mean") return ReadoutStat::mean;
    if (v == "sum") return ReadoutStat::sum;
    if (v == "max") return ReadoutStat::max;
    if (v == "var") return ReadoutStat::var;
    throw ConfigError("config: unknown readout statistic '" + v + "' (mean|sum|max|var)");
}

}  // namespace cfgdetail

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "task", "data_dir", "synthetic", "row_normalize", "data_seed",
        "sbm_sizes", "sbm_p_in", "sbm_p_out", "feature_flip", "train_per_class", "val_per_class",
        "graphs_per_class", "min_nodes", "max_nodes",
        "conv", "depth", "hidden", "tagcn_k", "dropout",
        "pooling", "pool_ratio", "sortpool_k", "diffpool_clusters",
        "readout", "fgsd", "fgsd_bins", "fgsd_range", "head_hidden",
        "lr", "beta1", "beta2", "eps", "weight_decay",
        "epochs", "patience", "batch_size", "folds", "seeds", "out_dir"};
    return keys;
}

inline void apply_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
    using namespace cfgdetail;
    if (key == "task") {
        if (value == "node")
            c.task = TaskKind::node;
        else if (value == "graph")
            c.task = TaskKind::graph;
        else
            throw ConfigError("config: task must be node|graph, got '" + value + "'");
    } else if (key == "data_dir") {
        c.data_dir = value;
    } else if (key == "synthetic") {
        if (value != "sbm" && value != "ring_vs_er" && value != "components")
            throw ConfigError("config: synthetic must be sbm|ring_vs_er|components, got '" + value + "'");
        c.synthetic = value;
    } else if (key == "row_normalize") {
        c.row_normalize = to_flag(value, key);
    } else if (key == "data_seed") {
        c.data_seed = static_cast<std::uint64_t>(to_int(value, key));
    } else if (key == "sbm_sizes") {
        c.sbm_sizes.clear();
        for (const auto& tok : split_list(value)) c.sbm_sizes.push_back(static_cast<int>(to_int(tok, key)));
    } else if (key == "sbm_p_in") {
        c.sbm_p_in = to_real(value, key);
    } else if (key == "sbm_p_out") {
        c.sbm_p_out = to_real(value, key);
    } else if (key == "feature_flip") {
        c.feature_flip = to_real(value, key);
    } else if (key == "train_per_class") {
        c.train_per_class = static_cast<int>(to_int(value, key));
    } else if (key == "val_per_class") {
        c.val_per_class = static_cast<int>(to_int(value, key));
    } else if (key == "graphs_per_class") {
        c.graphs_per_class = static_cast<int>(to_int(value, key));
    } else if (key == "min_nodes") {
        c.min_nodes = static_cast<int>(to_int(value, key));
    } else if (key == "max_nodes") {
        c.max_nodes = static_cast<int>(to_int(value, key));
    } else if (key == "conv") {
        if (value == "gcn")
            c.conv = ConvVariant::gcn;
        else if (value == "tagcn")
            c.conv = ConvVariant::tagcn;
        else
            throw ConfigError("config: conv must be gcn|tagcn, got '" + value + "'");
    } else if (key == "depth") {
        c.depth = static_cast<int>(to_int(value, key));
    } else if (key == "hidden") {
        c.hidden = static_cast<int>(to_int(value, key));
    } else if (key == "tagcn_k") {
        c.tagcn_k = static_cast<int>(to_int(value, key));
    } else if (key == "dropout") {
        c.dropout = to_real(value, key);
    } else if (key == "pooling") {
        if (value == "none")
            c.pooling = PoolMethod::none;
        else if (value == "topk")
            c.pooling = PoolMethod::topk;
        else if (value == "sagpool")
            c.pooling = PoolMethod::sagpool;
        else if (value == "sortpool")
            c.pooling = PoolMethod::sortpool;
        else if (value == "diffpool")
            c.pooling = PoolMethod::diffpool;
        else
            throw ConfigError("config: pooling must be none|topk|sagpool|sortpool|diffpool, got '" + value + "'");
    } else if (key == "pool_ratio") {
        c.pool_ratio = to_real(value, key);
    } else if (key == "sortpool_k") {
        c.sortpool_k = static_cast<int>(to_int(value, key));
    } else if (key == "diffpool_clusters") {
        c.diffpool_clusters = static_cast<int>(to_int(value, key));
    } else if (key == "readout") {
        c.readout.clear();
        for (const auto& tok : split_list(value)) c.readout.push_back(parse_readout(tok));
    } else if (key == "fgsd") {
        c.fgsd = to_flag(value, key);
    } else if (key == "fgsd_bins") {
        c.fgsd_bins = static_cast<int>(to_int(value, key));
    } else if (key == "fgsd_range") {
        c.fgsd_range = to_real(value, key);
    } else if (key == "head_hidden") {
        c.head_hidden = static_cast<int>(to_int(value, key));
    } else if (key == "lr") {
        c.lr = to_real(value, key);
    } else if (key == "beta1") {
        c.beta1 = to_real(value, key);
    } else if (key == "beta2") {
        c.beta2 = to_real(value, key);
    } else if (key == "eps") {
        c.eps = to_real(value, key);
    } else if (key == "weight_decay") {
        c.weight_decay = to_real(value, key);
    } else if (key == "epochs") {
        c.epochs = static_cast<int>(to_int(value, key));
    } else if (key == "patience") {
        c.patience = static_cast<int>(to_int(value, key));
    } else if (key == "batch_size") {
        c.batch_size = static_cast<int>(to_int(value, key));
    } else if (key == "folds") {
        c.folds = static_cast<int>(to_int(value, key));
    } else if (key == "seeds") {
        c.seeds.clear();
        for (const auto& tok : split_list(value)) c.seeds.push_back(static_cast<std::uint64_t>(to_int(tok, key)));
    } else if (key == "out_dir") {
        c.out_dir = value;
    } else {
        std::string all;
        for (const auto& k : config_keys()) all += (all.empty() ? "" : ", ") + k;
        throw ConfigError("config: unknown key '" + key + "'; valid keys: " + all);
    }
}

inline void validate_config(const ExperimentConfig& c) {
    if (c.epochs < 1) throw ConfigError("config: epochs must be >= 1");
    if (c.seeds.empty()) throw ConfigError("config: seeds must be nonempty");
    if (!(c.lr > 0.0)) throw ConfigError("config: lr must be positive");
    if (c.depth < 1) throw ConfigError("config: depth must be >= 1");
    if (c.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (c.folds < 2) throw ConfigError("config: folds must be >= 2");
    if (c.patience < 0) throw ConfigError("config: patience must be >= 0");
    if (c.task == TaskKind::node && c.pooling != PoolMethod::none)
        throw ConfigError("config: node classification admits no pooling layer");
    const bool has_dir = !c.data_dir.empty(), has_synth = !c.synthetic.empty();
    if (has_dir == has_synth)
        throw ConfigError("config: exactly one of data_dir / synthetic must be set");
}

inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    ExperimentConfig c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto nonws = line.find_first_not_of(" \t");
        if (nonws == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path.filename().string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

// "key=value" override from the command line.
inline void apply_override(ExperimentConfig& c, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must look like key=value: '" + assignment + "'");
    apply_config_value(c, assignment.substr(0, eq), assignment.substr(eq + 1));
}

// The model spec implied by a config, given the dataset's class count.
inline ModelSpec spec_from_config(const ExperimentConfig& c, int n_classes) {
    ModelSpec s;
    s.task = c.task;
    for (int i = 0; i < c.depth; ++i) {
        LayerSpec l;
        l.variant = c.conv;
        l.k = c.tagcn_k;
        l.width = c.hidden;
        if (c.task == TaskKind::node && i == c.depth - 1) l.width = n_classes;
        s.layers.push_back(l);
    }
    s.dropout = c.dropout;
    if (c.task == TaskKind::graph) {
        s.pooling = c.pooling;
        s.pool_ratio = c.pool_ratio;
        s.sortpool_k = c.sortpool_k;
        s.diffpool_clusters = c.diffpool_clusters;
        s.readout = c.readout;
        s.use_fgsd = c.fgsd;
        s.fgsd_bins = c.fgsd_bins;
        s.fgsd_range = c.fgsd_range;
        if (c.head_hidden > 0) s.head_hidden = {c.head_hidden};
    }
    return s;
}

}  // namespace gcnn
