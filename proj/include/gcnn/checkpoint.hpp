#pragma once

// Checkpoints: a text table of named parameter tensors.
//
//   gcnn-checkpoint 1
//   <parameter count>
//   <name> <rows> <cols>
//   <row of %.17g values, space-separated>   (rows lines)
//   ...
//
// %.17g round-trips IEEE doubles exactly. Loading validates the magic line,
// parameter names, order, and shapes against the receiving model.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gcnn/errors.hpp"
#include "gcnn/model.hpp"

namespace gcnn {

inline void save_checkpoint(const std::filesystem::path& path, Model& model) {
    std::ofstream out(path);
    if (!out) throw ParseError("checkpoint: cannot open for writing: " + path.string());
    auto params = model.parameters();
    out << "gcnn-checkpoint 1\n" << params.size() << "\n";
    char buf[40];
    for (const auto& p : params) {
        out << p.name << " " << p.tensor->rows << " " << p.tensor->cols << "\n";
        for (int i = 0; i < p.tensor->rows; ++i) {
            for (int j = 0; j < p.tensor->cols; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", p.tensor->at(i, j));
                out << (j ? " " : "") << buf;
            }
            out << "\n";
        }
    }
}

inline void load_checkpoint(const std::filesystem::path& path, Model& model) {
    std::ifstream in(path);
    if (!in) throw ParseError("checkpoint: missing or unreadable file: " + path.string());
    std::string magic;
    std::getline(in, magic);
    if (magic != "gcnn-checkpoint 1")
        throw ParseError("checkpoint: bad magic line in " + path.string());
    auto params = model.parameters();
    std::size_t count = 0;
    in >> count;
    if (count != params.size())
        throw ParseError("checkpoint: parameter count mismatch (file has " + std::to_string(count) +
                         ", model has " + std::to_string(params.size()) + ")");
    for (auto& p : params) {
        std::string name;
        int rows = 0, cols = 0;
        in >> name >> rows >> cols;
        if (!in) throw ParseError("checkpoint: truncated file " + path.string());
        if (name != p.name)
            throw ParseError("checkpoint: parameter name mismatch: expected '" + p.name + "', found '" +
                             name + "'");
        if (rows != p.tensor->rows || cols != p.tensor->cols)
            throw ParseError("checkpoint: shape mismatch for '" + name + "'");
        for (auto& v : p.tensor->data) {
            in >> v;
            if (!in) throw ParseError("checkpoint: truncated values for '" + name + "'");
        }
    }
}

}  // namespace gcnn
