#pragma once

// Dataset loading, writing, and synthesis. Two text layouts:
//
// Node-classification directory:
//   edges.txt     line 1: "N D" (D: 0 undirected, 1 directed); then one
//                 "src dst" pair per line, 0-indexed, whitespace-separated.
//                 Undirected graphs list each edge once (src < dst) and are
//                 symmetrized at load.
//   features.csv  N rows of comma-separated decimals, equal width.
//   labels.txt    one integer per node line; -1 marks an unlabeled node.
//   split.txt     one of train|val|test|none per node line.
//
// Graph-classification directory (TU style; files may also carry a
// "<dirname>_" prefix so public corpora drop in unchanged):
//   A.txt                  "u, v" pairs, 1-indexed global node ids.
//   graph_indicator.txt    1-indexed graph id per node line.
//   graph_labels.txt       one integer per graph; values are remapped to
//                          0..M-1 in sorted order.
//   node_labels.txt        optional; one-hot expanded into features.
//   node_attributes.txt    optional; comma-separated decimals per node.
// Graphs with neither labels nor attributes get degree-scalar features.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gcnn/errors.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/tensor.hpp"

namespace gcnn {

enum class Split { train, val, test, none };

struct NodeDataset {
    Graph graph;
    Tensor features;
    std::vector<int> labels;  // -1 = unlabeled
    std::vector<Split> split;
    int num_classes = 0;
};

struct GraphInstance {
    Graph graph;
    Tensor features;
    int label = 0;
    Tensor fgsd;  // filled by the harness when the model wants it
};

struct GraphDataset {
    std::vector<GraphInstance> graphs;
    int num_classes = 0;
};

namespace ioutil {

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("missing or unreadable file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline std::string loc(const std::filesystem::path& path, std::size_t line_no) {
    return path.filename().string() + ":" + std::to_string(line_no + 1);
}

inline long parse_int(const std::string& tok, const std::filesystem::path& path, std::size_t line_no) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (...) {
        throw ParseError(loc(path, line_no) + ": expected integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(loc(path, line_no) + ": trailing junk in integer '" + tok + "'");
    return v;
}

inline double parse_real(const std::string& tok, const std::filesystem::path& path, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (...) {
        throw ParseError(loc(path, line_no) + ": expected real number, got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(loc(path, line_no) + ": trailing junk in number '" + tok + "'");
    if (!std::isfinite(v)) throw ParseError(loc(path, line_no) + ": non-finite value rejected");
    return v;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            toks.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    toks.push_back(cur);
    for (auto& t : toks) {
        std::size_t b = t.find_first_not_of(" \t");
        std::size_t e = t.find_last_not_of(" \t");
        t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    }
    return toks;
}

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Resolves "A.txt" or "<dirname>_A.txt".
inline std::filesystem::path tu_file(const std::filesystem::path& dir, const std::string& base,
                                     bool required) {
    auto plain = dir / base;
    if (std::filesystem::exists(plain)) return plain;
    auto prefixed = dir / (dir.filename().string() + "_" + base);
    if (std::filesystem::exists(prefixed)) return prefixed;
    if (required) throw ParseError("missing file: " + plain.string() + " (or " + prefixed.string() + ")");
    return {};
}

}  // namespace ioutil

// ---------------------------------------------------------------------------
// Node dataset

inline NodeDataset load_node_dataset(const std::filesystem::path& dir, bool row_normalize = true) {
    namespace io = ioutil;
    auto epath = dir / "edges.txt";
    auto lines = io::read_lines(epath);
    if (lines.empty()) throw ParseError(epath.string() + ": empty file");
    auto head = io::split_ws(lines[0]);
    if (head.size() != 2) throw ParseError(io::loc(epath, 0) + ": header must be 'N D'");
    const int n = static_cast<int>(io::parse_int(head[0], epath, 0));
    const long dflag = io::parse_int(head[1], epath, 0);
    if (n < 0 || (dflag != 0 && dflag != 1)) throw ParseError(io::loc(epath, 0) + ": invalid header values");
    const bool directed = dflag == 1;

    std::vector<EdgeTriple> pairs;
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto toks = io::split_ws(lines[i]);
        if (toks.size() != 2) throw ParseError(io::loc(epath, i) + ": expected 'src dst'");
        int src = static_cast<int>(io::parse_int(toks[0], epath, i));
        int dst = static_cast<int>(io::parse_int(toks[1], epath, i));
        if (src < 0 || src >= n || dst < 0 || dst >= n)
            throw ParseError(io::loc(epath, i) + ": node index out of range [0, " + std::to_string(n) + ")");
        if (!seen.insert({src, dst}).second)
            throw ParseError(io::loc(epath, i) + ": duplicate edge (" + toks[0] + ", " + toks[1] + ")");
        pairs.push_back({src, dst, 1.0});
    }

    NodeDataset ds;
    ds.graph = directed ? Graph(n, true, std::move(pairs)) : Graph::from_undirected_pairs(n, pairs);

    auto fpath = dir / "features.csv";
    auto flines = io::read_lines(fpath);
    while (!flines.empty() && flines.back().empty()) flines.pop_back();
    if (static_cast<int>(flines.size()) != n)
        throw ParseError(fpath.string() + ": expected " + std::to_string(n) + " rows, found " +
                         std::to_string(flines.size()));
    int cols = -1;
    for (std::size_t i = 0; i < flines.size(); ++i) {
        auto toks = io::split_commas(flines[i]);
        if (cols < 0) {
            cols = static_cast<int>(toks.size());
            ds.features = Tensor(n, cols);
        }
        if (static_cast<int>(toks.size()) != cols)
            throw ParseError(io::loc(fpath, i) + ": ragged row (expected " + std::to_string(cols) + " columns)");
        for (int j = 0; j < cols; ++j)
            ds.features.at(static_cast<int>(i), j) = io::parse_real(toks[static_cast<std::size_t>(j)], fpath, i);
    }
    if (row_normalize) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols; ++j) s += ds.features.at(i, j);
            if (s != 0.0)
                for (int j = 0; j < cols; ++j) ds.features.at(i, j) /= s;
        }
    }

    auto lpath = dir / "labels.txt";
    auto llines = io::read_lines(lpath);
    while (!llines.empty() && llines.back().empty()) llines.pop_back();
    if (static_cast<int>(llines.size()) != n)
        throw ParseError(lpath.string() + ": expected " + std::to_string(n) + " labels");
    for (std::size_t i = 0; i < llines.size(); ++i) {
        int v = static_cast<int>(io::parse_int(llines[i], lpath, i));
        if (v < -1) throw ParseError(io::loc(lpath, i) + ": label must be >= -1");
        ds.labels.push_back(v);
        ds.num_classes = std::max(ds.num_classes, v + 1);
    }

    auto spath = dir / "split.txt";
    auto slines = io::read_lines(spath);
    while (!slines.empty() && slines.back().empty()) slines.pop_back();
    if (static_cast<int>(slines.size()) != n)
        throw ParseError(spath.string() + ": expected " + std::to_string(n) + " split tokens");
    for (std::size_t i = 0; i < slines.size(); ++i) {
        const std::string& tok = slines[i];
        Split s;
        if (tok == "train")
            s = Split::train;
        else if (tok == "val")
            s = Split::val;
        else if (tok == "test")
            s = Split::test;
        else if (tok == "none")
            s = Split::none;
        else
            throw ParseError(io::loc(spath, i) + ": unknown split token '" + tok + "'");
        if (s != Split::none && ds.labels[i] < 0)
            throw ParseError(io::loc(spath, i) + ": node in split '" + tok + "' has no label");
        ds.split.push_back(s);
    }
    return ds;
}

// Canonical writer for the node layout above; unit edge weights only.
inline void write_node_dataset(const std::filesystem::path& dir, const NodeDataset& ds) {
    namespace io = ioutil;
    std::filesystem::create_directories(dir);
    const int n = ds.graph.num_nodes();

    std::ofstream e(dir / "edges.txt");
    e << n << " " << (ds.graph.directed() ? 1 : 0) << "\n";
    for (const auto& edge : ds.graph.edges()) {
        if (edge.weight != 1.0)
            throw DomainError("write_node_dataset: only unit edge weights are representable");
        if (!ds.graph.directed() && edge.src > edge.dst) continue;  // one line per unordered pair
        e << edge.src << " " << edge.dst << "\n";
    }

    std::ofstream f(dir / "features.csv");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < ds.features.cols; ++j)
            f << (j ? "," : "") << io::fmt_real(ds.features.at(i, j));
        f << "\n";
    }

    std::ofstream l(dir / "labels.txt");
    for (int v : ds.labels) l << v << "\n";

    std::ofstream s(dir / "split.txt");
    for (Split sp : ds.split) {
        switch (sp) {
            case Split::train: s << "train\n"; break;
            case Split::val: s << "val\n"; break;
            case Split::test: s << "test\n"; break;
            case Split::none: s << "none\n"; break;
        }
    }
}

// ---------------------------------------------------------------------------
// Graph dataset (TU layout)

inline GraphDataset load_graph_dataset(const std::filesystem::path& dir) {
    namespace io = ioutil;
    auto ind_path = io::tu_file(dir, "graph_indicator.txt", true);
    auto ind_lines = io::read_lines(ind_path);
    while (!ind_lines.empty() && ind_lines.back().empty()) ind_lines.pop_back();
    const int total_nodes = static_cast<int>(ind_lines.size());
    if (total_nodes == 0) throw ParseError(ind_path.string() + ": empty file");

    auto first_token = [](const std::vector<std::string>& toks, const std::filesystem::path& p,
                          std::size_t line) -> const std::string& {
        if (toks.empty()) throw ParseError(io::loc(p, line) + ": blank line where a value was expected");
        return toks.front();
    };

    std::vector<int> graph_of(static_cast<std::size_t>(total_nodes));
    int num_graphs = 0;
    for (std::size_t i = 0; i < ind_lines.size(); ++i) {
        auto toks = io::split_ws(ind_lines[i]);
        int gid = static_cast<int>(io::parse_int(first_token(toks, ind_path, i), ind_path, i)) - 1;
        if (gid < 0) throw ParseError(io::loc(ind_path, i) + ": graph ids are 1-indexed");
        graph_of[i] = gid;
        num_graphs = std::max(num_graphs, gid + 1);
    }

    // local reindexing: nodes of each graph in ascending global order
    std::vector<std::vector<int>> members(static_cast<std::size_t>(num_graphs));
    std::vector<int> local_id(static_cast<std::size_t>(total_nodes));
    for (int v = 0; v < total_nodes; ++v) {
        auto& m = members[static_cast<std::size_t>(graph_of[static_cast<std::size_t>(v)])];
        local_id[static_cast<std::size_t>(v)] = static_cast<int>(m.size());
        m.push_back(v);
    }

    auto a_path = io::tu_file(dir, "A.txt", true);
    auto a_lines = io::read_lines(a_path);
    std::vector<std::set<std::pair<int, int>>> edge_sets(static_cast<std::size_t>(num_graphs));
    for (std::size_t i = 0; i < a_lines.size(); ++i) {
        if (a_lines[i].empty()) continue;
        auto toks = a_lines[i].find(',') != std::string::npos ? io::split_commas(a_lines[i])
                                                              : io::split_ws(a_lines[i]);
        if (toks.size() != 2) throw ParseError(io::loc(a_path, i) + ": expected 'u, v'");
        int u = static_cast<int>(io::parse_int(toks[0], a_path, i)) - 1;
        int v = static_cast<int>(io::parse_int(toks[1], a_path, i)) - 1;
        if (u < 0 || u >= total_nodes || v < 0 || v >= total_nodes)
            throw ParseError(io::loc(a_path, i) + ": node id out of range");
        if (graph_of[static_cast<std::size_t>(u)] != graph_of[static_cast<std::size_t>(v)])
            throw ParseError(io::loc(a_path, i) + ": edge endpoints belong to different graphs");
        int gid = graph_of[static_cast<std::size_t>(u)];
        int lu = local_id[static_cast<std::size_t>(u)], lv = local_id[static_cast<std::size_t>(v)];
        auto& es = edge_sets[static_cast<std::size_t>(gid)];
        es.insert({std::min(lu, lv), std::max(lu, lv)});  // undirected, dedup both orientations
    }

    auto lab_path = io::tu_file(dir, "graph_labels.txt", true);
    auto lab_lines = io::read_lines(lab_path);
    while (!lab_lines.empty() && lab_lines.back().empty()) lab_lines.pop_back();
    if (static_cast<int>(lab_lines.size()) != num_graphs)
        throw ParseError(lab_path.string() + ": expected " + std::to_string(num_graphs) + " labels");
    std::vector<long> raw_labels;
    std::set<long> label_values;
    for (std::size_t i = 0; i < lab_lines.size(); ++i) {
        long v = io::parse_int(first_token(io::split_ws(lab_lines[i]), lab_path, i), lab_path, i);
        raw_labels.push_back(v);
        label_values.insert(v);
    }
    std::map<long, int> remap;
    for (long v : label_values) remap[v] = static_cast<int>(remap.size());

    // optional node features
    std::vector<long> node_labels;
    std::map<long, int> label_vocab;
    auto nl_path = io::tu_file(dir, "node_labels.txt", false);
    if (!nl_path.empty()) {
        auto nl = io::read_lines(nl_path);
        while (!nl.empty() && nl.back().empty()) nl.pop_back();
        if (static_cast<int>(nl.size()) != total_nodes)
            throw ParseError(nl_path.string() + ": expected one label per node");
        std::set<long> vocab;
        for (std::size_t i = 0; i < nl.size(); ++i) {
            long v = io::parse_int(first_token(io::split_ws(nl[i]), nl_path, i), nl_path, i);
            node_labels.push_back(v);
            vocab.insert(v);
        }
        for (long v : vocab) label_vocab[v] = static_cast<int>(label_vocab.size());
    }
    std::vector<std::vector<double>> node_attrs;
    int attr_cols = 0;
    auto na_path = io::tu_file(dir, "node_attributes.txt", false);
    if (!na_path.empty()) {
        auto na = io::read_lines(na_path);
        while (!na.empty() && na.back().empty()) na.pop_back();
        if (static_cast<int>(na.size()) != total_nodes)
            throw ParseError(na_path.string() + ": expected one attribute row per node");
        for (std::size_t i = 0; i < na.size(); ++i) {
            auto toks = io::split_commas(na[i]);
            if (attr_cols == 0) attr_cols = static_cast<int>(toks.size());
            if (static_cast<int>(toks.size()) != attr_cols)
                throw ParseError(io::loc(na_path, i) + ": ragged attribute row");
            std::vector<double> row;
            for (auto& t : toks) row.push_back(io::parse_real(t, na_path, i));
            node_attrs.push_back(std::move(row));
        }
    }

    GraphDataset ds;
    ds.num_classes = static_cast<int>(remap.size());
    const int feat_cols = attr_cols + static_cast<int>(label_vocab.size());
    for (int gid = 0; gid < num_graphs; ++gid) {
        const auto& m = members[static_cast<std::size_t>(gid)];
        const int n = static_cast<int>(m.size());
        std::vector<EdgeTriple> pairs;
        for (const auto& [u, v] : edge_sets[static_cast<std::size_t>(gid)]) pairs.push_back({u, v, 1.0});
        GraphInstance inst;
        inst.graph = Graph::from_undirected_pairs(n, pairs);
        inst.label = remap.at(raw_labels[static_cast<std::size_t>(gid)]);
        if (feat_cols > 0) {
            inst.features = Tensor(n, feat_cols);
            for (int li = 0; li < n; ++li) {
                int global = m[static_cast<std::size_t>(li)];
                int off = 0;
                if (attr_cols > 0) {
                    for (int j = 0; j < attr_cols; ++j)
                        inst.features.at(li, j) = node_attrs[static_cast<std::size_t>(global)][static_cast<std::size_t>(j)];
                    off = attr_cols;
                }
                if (!label_vocab.empty())
                    inst.features.at(li, off + label_vocab.at(node_labels[static_cast<std::size_t>(global)])) = 1.0;
            }
        } else {
            // degree-scalar fallback
            inst.features = Tensor(n, 1);
            auto deg = degree_matrix(inst.graph);
            for (int li = 0; li < n; ++li) inst.features.at(li, 0) = deg[static_cast<std::size_t>(li)];
        }
        ds.graphs.push_back(std::move(inst));
    }
    return ds;
}

// TU-layout writer (plain file names); features go to node_attributes.txt.
inline void write_graph_dataset(const std::filesystem::path& dir, const GraphDataset& ds) {
    namespace io = ioutil;
    std::filesystem::create_directories(dir);
    std::ofstream a(dir / "A.txt");
    std::ofstream ind(dir / "graph_indicator.txt");
    std::ofstream lab(dir / "graph_labels.txt");
    std::ofstream attr(dir / "node_attributes.txt");
    int base = 0;
    for (std::size_t gid = 0; gid < ds.graphs.size(); ++gid) {
        const auto& inst = ds.graphs[gid];
        for (const auto& e : inst.graph.edges()) {
            if (e.weight != 1.0)
                throw DomainError("write_graph_dataset: only unit edge weights are representable");
            a << (base + e.src + 1) << ", " << (base + e.dst + 1) << "\n";
        }
        for (int v = 0; v < inst.graph.num_nodes(); ++v) {
            ind << (gid + 1) << "\n";
            for (int j = 0; j < inst.features.cols; ++j)
                attr << (j ? "," : "") << io::fmt_real(inst.features.at(v, j));
            attr << "\n";
        }
        lab << inst.label << "\n";
        base += inst.graph.num_nodes();
    }
}

// ---------------------------------------------------------------------------
// Synthetic datasets

struct SbmNodeParams {
    std::vector<int> class_sizes = {100, 100, 100, 100};
    double p_in = 0.10;
    double p_out = 0.005;
    double feature_flip = 0.3;  // probability a node's one-hot feature encodes a uniform class
    int train_per_class = 20;
    int val_per_class = 20;
};

inline NodeDataset make_sbm_node_task(const SbmNodeParams& p, std::uint64_t seed) {
    for (int s : p.class_sizes)
        if (s < p.train_per_class + p.val_per_class)
            throw DomainError("make_sbm_node_task: class smaller than train+val quota");
    if (!(p.feature_flip >= 0.0 && p.feature_flip <= 1.0))
        throw DomainError("make_sbm_node_task: flip probability outside [0, 1]");

    auto [graph, labels] = sbm(p.class_sizes, p.p_in, p.p_out, seed);
    const int n = graph.num_nodes();
    const int m = static_cast<int>(p.class_sizes.size());

    NodeDataset ds;
    ds.graph = std::move(graph);
    ds.labels = std::move(labels);
    ds.num_classes = m;
    ds.features = Tensor(n, m);
    Rng feat_rng(mix_seed(seed, 0xFEA7));
    for (int v = 0; v < n; ++v) {
        int shown = ds.labels[static_cast<std::size_t>(v)];
        if (feat_rng.uniform() < p.feature_flip) shown = static_cast<int>(feat_rng.below(static_cast<std::uint64_t>(m)));
        ds.features.at(v, shown) = 1.0;
    }

    ds.split.assign(static_cast<std::size_t>(n), Split::test);
    Rng split_rng(mix_seed(seed, 0x5017));
    for (int c = 0; c < m; ++c) {
        std::vector<int> nodes;
        for (int v = 0; v < n; ++v)
            if (ds.labels[static_cast<std::size_t>(v)] == c) nodes.push_back(v);
        split_rng.shuffle(nodes);
        for (int i = 0; i < p.train_per_class; ++i) ds.split[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = Split::train;
        for (int i = 0; i < p.val_per_class; ++i)
            ds.split[static_cast<std::size_t>(nodes[static_cast<std::size_t>(p.train_per_class + i)])] = Split::val;
    }
    return ds;
}

struct GraphTaskParams {
    int graphs_per_class = 50;
    int min_nodes = 12;
    int max_nodes = 24;
};

namespace detail {

// Synthetic graph-task features: raw degree plus a capped one-hot degree
// bucket, so a mean readout sees both the average degree and the degree
// histogram.
inline constexpr int kDegreeBuckets = 6;

inline Tensor degree_features(const Graph& g) {
    Tensor f(g.num_nodes(), 1 + kDegreeBuckets);
    auto deg = degree_matrix(g);
    for (int v = 0; v < g.num_nodes(); ++v) {
        double d = deg[static_cast<std::size_t>(v)];
        f.at(v, 0) = d;
        int bucket = std::min(kDegreeBuckets - 1, static_cast<int>(d));
        f.at(v, 1 + bucket) = 1.0;
    }
    return f;
}

inline Graph undirected_cycle(int n) {
    std::vector<EdgeTriple> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({i, (i + 1) % n, 1.0});
    return Graph::from_undirected_pairs(n, pairs);
}

}  // namespace detail

// Two families of matched average degree (~2): undirected cycles (label 0)
// versus Erdos-Renyi graphs with p = 2/(n-1) (label 1). Degree statistics
// and diameters separate them.
inline GraphDataset make_ring_vs_er_task(const GraphTaskParams& p, std::uint64_t seed) {
    if (p.min_nodes < 4 || p.max_nodes < p.min_nodes)
        throw DomainError("make_ring_vs_er_task: need 4 <= min_nodes <= max_nodes");
    if (p.graphs_per_class < 1) throw DomainError("make_ring_vs_er_task: graphs_per_class must be positive");
    Rng rng(seed);
    GraphDataset ds;
    ds.num_classes = 2;
    for (int i = 0; i < p.graphs_per_class; ++i) {
        int n = rng.uniform_int(p.min_nodes, p.max_nodes);
        GraphInstance inst;
        inst.graph = detail::undirected_cycle(n);
        inst.features = detail::degree_features(inst.graph);
        inst.label = 0;
        ds.graphs.push_back(std::move(inst));
    }
    for (int i = 0; i < p.graphs_per_class; ++i) {
        int n = rng.uniform_int(p.min_nodes, p.max_nodes);
        GraphInstance inst;
        inst.graph = erdos_renyi(n, 2.0 / (n - 1), rng.next_u64());
        inst.features = detail::degree_features(inst.graph);
        inst.label = 1;
        ds.graphs.push_back(std::move(inst));
    }
    return ds;
}

// One dense blob (label 0) versus two disconnected blobs (label 1).
inline GraphDataset make_component_count_task(const GraphTaskParams& p, std::uint64_t seed) {
    if (p.min_nodes < 6 || p.max_nodes < p.min_nodes)
        throw DomainError("make_component_count_task: need 6 <= min_nodes <= max_nodes");
    if (p.graphs_per_class < 1) throw DomainError("make_component_count_task: graphs_per_class must be positive");
    Rng rng(seed);
    GraphDataset ds;
    ds.num_classes = 2;
    for (int label = 0; label < 2; ++label) {
        for (int i = 0; i < p.graphs_per_class; ++i) {
            int n = rng.uniform_int(p.min_nodes, p.max_nodes);
            std::vector<EdgeTriple> pairs;
            int cut = label == 0 ? n : n / 2;  // one blob, or two blobs split at n/2
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) {
                    bool same_blob = (u < cut) == (v < cut);
                    if (same_blob && rng.uniform() < 0.5) pairs.push_back({u, v, 1.0});
                }
            GraphInstance inst;
            inst.graph = Graph::from_undirected_pairs(n, pairs);
            inst.features = detail::degree_features(inst.graph);
            inst.label = label;
            ds.graphs.push_back(std::move(inst));
        }
    }
    return ds;
}

}  // namespace gcnn
