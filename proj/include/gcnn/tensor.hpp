#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "gcnn/errors.hpp"
#include "gcnn/rng.hpp"

namespace gcnn {

// Dense real matrix, row-major. Node signals are (N x C) tensors; a scalar
// is (1 x 1). `grad` is populated by Tape::backward for tensors registered
// with requires_grad.
struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;
    bool requires_grad = false;
    std::vector<double> grad;  // empty until backward runs

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {
        if (r < 0 || c < 0) throw ShapeError("Tensor: negative dimension");
    }

    static Tensor zeros(int r, int c) { return Tensor(r, c); }

    static Tensor full(int r, int c, double v) {
        Tensor t(r, c);
        for (auto& x : t.data) x = v;
        return t;
    }

    static Tensor identity(int n) {
        Tensor t(n, n);
        for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
        return t;
    }

    static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rws) {
        int r = static_cast<int>(rws.size());
        int c = r > 0 ? static_cast<int>(rws.begin()->size()) : 0;
        Tensor t(r, c);
        int i = 0;
        for (const auto& row : rws) {
            if (static_cast<int>(row.size()) != c) throw ShapeError("Tensor::from_rows: ragged rows");
            int j = 0;
            for (double v : row) t.at(i, j++) = v;
            ++i;
        }
        return t;
    }

    static Tensor scalar(double v) {
        Tensor t(1, 1);
        t.data[0] = v;
        return t;
    }

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
    }

    void zero_grad() { grad.assign(data.size(), 0.0); }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
};

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

// Glorot-uniform initialization; bound sqrt(6 / (fan_in + fan_out)).
inline Tensor glorot_uniform(int fan_in, int fan_out, Rng& rng) {
    Tensor w(fan_in, fan_out);
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (auto& v : w.data) v = rng.uniform(-bound, bound);
    return w;
}

}  // namespace gcnn
