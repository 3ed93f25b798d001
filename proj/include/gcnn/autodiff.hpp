#pragma once

// Minimal reverse-mode automatic differentiation on dense tensors. Ops are
// recorded on a Tape in execution order (already topological); backward is
// one reverse sweep that visits each node exactly once and accumulates
// gradients additively. Leaves bound to external tensors receive gradients
// in Tensor::grad, which persists across backward calls (accumulation) until
// zeroed by the caller. 64-bit floats throughout; every forward result is
// checked for NaN/Inf.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gcnn/errors.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/tensor.hpp"

namespace gcnn {

enum class Reduce { mean, sum, max, var };

class Tape {
public:
    // Registers an externally owned tensor (model parameter or input).
    // Gradients accumulate into t->grad when t->requires_grad.
    int leaf(Tensor* t) {
        if (t == nullptr) throw DomainError("Tape::leaf: null tensor");
        check_finite(*t, "leaf");
        Node node;
        node.external = t;
        node.needs = t->requires_grad;
        nodes_.push_back(std::move(node));
        return last();
    }

    // A value owned by the tape with no gradient path.
    int constant(Tensor v) {
        check_finite(v, "constant");
        Node node;
        node.owned = std::move(v);
        node.needs = false;
        nodes_.push_back(std::move(node));
        return last();
    }

    const Tensor& value(int id) const {
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        return n.external ? *n.external : n.owned;
    }

    // Gradient buffer of a node; valid after backward().
    const std::vector<double>& grad(int id) const {
        const Node& n = nodes_[static_cast<std::size_t>(id)];
        return n.external ? n.external->grad : n.grad;
    }

    std::size_t size() const { return nodes_.size(); }

    // ----- primitives ------------------------------------------------------

    int add(int a, int b) {
        const Tensor &x = value(a), &y = value(b);
        if (!x.same_shape(y)) throw ShapeError("add: shape mismatch");
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] + y.data[i];
        return record(std::move(out), {a, b}, [a, b](Tape& t, const std::vector<double>& g) {
            t.accumulate(a, g);
            t.accumulate(b, g);
        });
    }

    int scale(int a, double c) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = c * x.data[i];
        return record(std::move(out), {a}, [a, c](Tape& t, const std::vector<double>& g) {
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += c * g[i];
        });
    }

    int add_scalar(int a, double c) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] + c;
        return record(std::move(out), {a},
                      [a](Tape& t, const std::vector<double>& g) { t.accumulate(a, g); });
    }

    int matmul(int a, int b) {
        const Tensor &x = value(a), &y = value(b);
        if (x.cols != y.rows) throw ShapeError("matmul: inner dimensions differ");
        Tensor out(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                double v = x.at(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < y.cols; ++j) out.at(i, j) += v * y.at(k, j);
            }
        return record(std::move(out), {a, b}, [a, b](Tape& t, const std::vector<double>& g) {
            const Tensor &x = t.value(a), &y = t.value(b);
            const int rows = x.rows, inner = x.cols, cols = y.cols;
            if (t.needs(a)) {
                auto& da = t.grad_buf(a);
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < cols; ++j) {
                        double gv = g[static_cast<std::size_t>(i) * cols + j];
                        if (gv == 0.0) continue;
                        for (int k = 0; k < inner; ++k)
                            da[static_cast<std::size_t>(i) * inner + k] += gv * y.at(k, j);
                    }
            }
            if (t.needs(b)) {
                auto& db = t.grad_buf(b);
                for (int i = 0; i < rows; ++i)
                    for (int k = 0; k < inner; ++k) {
                        double xv = x.at(i, k);
                        if (xv == 0.0) continue;
                        for (int j = 0; j < cols; ++j)
                            db[static_cast<std::size_t>(k) * cols + j] += xv * g[static_cast<std::size_t>(i) * cols + j];
                    }
            }
        });
    }

    // y = A * x with the graph's sparse adjacency as the fixed operator.
    int sparse_matmul(const Graph& g, int x) {
        const Tensor& xv = value(x);
        Tensor out = shift(g, xv);
        Graph gc = g;  // own a copy; tapes may outlive the caller's graph
        return record(std::move(out), {x}, [x, gc = std::move(gc)](Tape& t, const std::vector<double>& gr) {
            Tensor up(t.value(x).rows, t.value(x).cols);
            up.data = gr;
            Tensor down = shift_transpose(gc, up);
            t.accumulate(x, down.data);
        });
    }

    int transpose(int a) {
        const Tensor& x = value(a);
        Tensor out(x.cols, x.rows);
        for (int i = 0; i < x.rows; ++i)
            for (int j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
        return record(std::move(out), {a}, [a](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(a);
            auto& da = t.grad_buf(a);
            for (int i = 0; i < x.rows; ++i)
                for (int j = 0; j < x.cols; ++j)
                    da[static_cast<std::size_t>(i) * x.cols + j] += g[static_cast<std::size_t>(j) * x.rows + i];
        });
    }

    int hadamard(int a, int b) {
        const Tensor &x = value(a), &y = value(b);
        if (!x.same_shape(y)) throw ShapeError("hadamard: shape mismatch");
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] * y.data[i];
        return record(std::move(out), {a, b}, [a, b](Tape& t, const std::vector<double>& g) {
            const Tensor &x = t.value(a), &y = t.value(b);
            if (t.needs(a)) {
                auto& da = t.grad_buf(a);
                for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * y.data[i];
            }
            if (t.needs(b)) {
                auto& db = t.grad_buf(b);
                for (std::size_t i = 0; i < g.size(); ++i) db[i] += g[i] * x.data[i];
            }
        });
    }

    int relu(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
        return record(std::move(out), {a}, [a](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(a);
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (x.data[i] > 0.0) da[i] += g[i];
        });
    }

    int tanh_op(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = std::tanh(x.data[i]);
        int id = record(std::move(out), {a}, [](Tape&, const std::vector<double>&) {});
        rebind_backward(id, [a, id](Tape& t, const std::vector<double>& g) {
            const Tensor& y = t.value(id);
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * (1.0 - y.data[i] * y.data[i]);
        });
        return id;
    }

    int log_op(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = std::log(x.data[i]);
        return record(std::move(out), {a}, [a](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(a);
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] / x.data[i];
        });
    }

    // x * log(x) with the 0 * log 0 := 0 convention (entropy terms).
    int xlogx(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] = x.data[i] > 0.0 ? x.data[i] * std::log(x.data[i]) : 0.0;
        return record(std::move(out), {a}, [a](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(a);
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (x.data[i] > 1e-300) da[i] += g[i] * (std::log(x.data[i]) + 1.0);
        });
    }

    // Subgradient 0 at the origin keeps Frobenius-norm losses finite.
    int sqrt_op(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = std::sqrt(x.data[i]);
        int id = record(std::move(out), {a}, [](Tape&, const std::vector<double>&) {});
        rebind_backward(id, [a, id](Tape& t, const std::vector<double>& g) {
            const Tensor& y = t.value(id);
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (y.data[i] > 1e-15) da[i] += g[i] * 0.5 / y.data[i];
        });
        return id;
    }

    // 1/sqrt(x) with the 0/0 := 0 cutoff convention for (near-)zero inputs.
    int rsqrt_op(int a) {
        constexpr double tau = 1e-12;
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] = x.data[i] > tau ? 1.0 / std::sqrt(x.data[i]) : 0.0;
        return record(std::move(out), {a}, [a](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(a);
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (x.data[i] > tau) da[i] += g[i] * -0.5 / (x.data[i] * std::sqrt(x.data[i]));
        });
    }

    int softmax_rows(int a) {
        const Tensor& x = value(a);
        Tensor out(x.rows, x.cols);
        for (int i = 0; i < x.rows; ++i) {
            double m = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < x.cols; ++j) m = std::max(m, x.at(i, j));
            double z = 0.0;
            for (int j = 0; j < x.cols; ++j) z += std::exp(x.at(i, j) - m);
            for (int j = 0; j < x.cols; ++j) out.at(i, j) = std::exp(x.at(i, j) - m) / z;
        }
        int id = record(std::move(out), {a}, [](Tape&, const std::vector<double>&) {});
        rebind_backward(id, [a, id](Tape& t, const std::vector<double>& g) {
            const Tensor& y = t.value(id);
            auto& da = t.grad_buf(a);
            for (int i = 0; i < y.rows; ++i) {
                double dot = 0.0;
                for (int j = 0; j < y.cols; ++j)
                    dot += g[static_cast<std::size_t>(i) * y.cols + j] * y.at(i, j);
                for (int j = 0; j < y.cols; ++j)
                    da[static_cast<std::size_t>(i) * y.cols + j] +=
                        y.at(i, j) * (g[static_cast<std::size_t>(i) * y.cols + j] - dot);
            }
        });
        return id;
    }

    int concat_cols(const std::vector<int>& xs) {
        if (xs.empty()) throw ShapeError("concat_cols: empty input list");
        int rows = value(xs[0]).rows;
        int total = 0;
        for (int id : xs) {
            if (value(id).rows != rows) throw ShapeError("concat_cols: row counts differ");
            total += value(id).cols;
        }
        Tensor out(rows, total);
        int off = 0;
        for (int id : xs) {
            const Tensor& x = value(id);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < x.cols; ++j) out.at(i, off + j) = x.at(i, j);
            off += x.cols;
        }
        std::vector<int> inputs = xs;
        return record(std::move(out), inputs, [xs, rows, total](Tape& t, const std::vector<double>& g) {
            int off = 0;
            for (int id : xs) {
                const Tensor& x = t.value(id);
                if (t.needs(id)) {
                    auto& da = t.grad_buf(id);
                    for (int i = 0; i < rows; ++i)
                        for (int j = 0; j < x.cols; ++j)
                            da[static_cast<std::size_t>(i) * x.cols + j] +=
                                g[static_cast<std::size_t>(i) * total + off + j];
                }
                off += x.cols;
            }
        });
    }

    // Per-column statistic over rows -> (1 x C). max routes its gradient to
    // the first maximal row (lowest index) for determinism. var is the
    // population variance.
    int reduce(int a, Reduce kind) {
        const Tensor& x = value(a);
        if (x.rows < 1) throw ShapeError("reduce: needs at least one row");
        const int n = x.rows, c = x.cols;
        Tensor out(1, c);
        std::vector<int> argmax(static_cast<std::size_t>(c), 0);
        std::vector<double> mean(static_cast<std::size_t>(c), 0.0);
        for (int j = 0; j < c; ++j) {
            double s = 0.0, best = x.at(0, j);
            int bi = 0;
            for (int i = 0; i < n; ++i) {
                s += x.at(i, j);
                if (x.at(i, j) > best) {
                    best = x.at(i, j);
                    bi = i;
                }
            }
            mean[static_cast<std::size_t>(j)] = s / n;
            argmax[static_cast<std::size_t>(j)] = bi;
            switch (kind) {
                case Reduce::sum: out.at(0, j) = s; break;
                case Reduce::mean: out.at(0, j) = s / n; break;
                case Reduce::max: out.at(0, j) = best; break;
                case Reduce::var: {
                    double v = 0.0;
                    for (int i = 0; i < n; ++i) {
                        double d = x.at(i, j) - s / n;
                        v += d * d;
                    }
                    out.at(0, j) = v / n;
                    break;
                }
            }
        }
        return record(std::move(out), {a},
                      [a, kind, n, c, argmax = std::move(argmax), mean = std::move(mean)](
                          Tape& t, const std::vector<double>& g) {
                          const Tensor& x = t.value(a);
                          auto& da = t.grad_buf(a);
                          for (int j = 0; j < c; ++j) {
                              double gj = g[static_cast<std::size_t>(j)];
                              switch (kind) {
                                  case Reduce::sum:
                                      for (int i = 0; i < n; ++i) da[static_cast<std::size_t>(i) * c + j] += gj;
                                      break;
                                  case Reduce::mean:
                                      for (int i = 0; i < n; ++i) da[static_cast<std::size_t>(i) * c + j] += gj / n;
                                      break;
                                  case Reduce::max:
                                      da[static_cast<std::size_t>(argmax[static_cast<std::size_t>(j)]) * c + j] += gj;
                                      break;
                                  case Reduce::var:
                                      for (int i = 0; i < n; ++i)
                                          da[static_cast<std::size_t>(i) * c + j] +=
                                              gj * 2.0 * (x.at(i, j) - mean[static_cast<std::size_t>(j)]) / n;
                                      break;
                              }
                          }
                      });
    }

    int sum_all(int a) {
        const Tensor& x = value(a);
        double s = 0.0;
        for (double v : x.data) s += v;
        return record(Tensor::scalar(s), {a}, [a](Tape& t, const std::vector<double>& g) {
            auto& da = t.grad_buf(a);
            for (auto& v : da) v += g[0];
        });
    }

    // Row selection; an index of -1 produces a zero row (used for padding).
    int gather_rows(int a, std::vector<int> idx) {
        const Tensor& x = value(a);
        Tensor out(static_cast<int>(idx.size()), x.cols);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            int i = idx[r];
            if (i < -1 || i >= x.rows) throw ShapeError("gather_rows: index out of range");
            if (i >= 0)
                for (int j = 0; j < x.cols; ++j) out.at(static_cast<int>(r), j) = x.at(i, j);
        }
        return record(std::move(out), {a}, [a, idx = std::move(idx)](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(a);
            auto& da = t.grad_buf(a);
            for (std::size_t r = 0; r < idx.size(); ++r) {
                int i = idx[r];
                if (i < 0) continue;
                for (int j = 0; j < x.cols; ++j)
                    da[static_cast<std::size_t>(i) * x.cols + j] += g[r * static_cast<std::size_t>(x.cols) + j];
            }
        });
    }

    // y_ij = a_ij * v_i with v an (N x 1) gate vector.
    int scale_rows(int a, int v) {
        const Tensor &x = value(a), &w = value(v);
        if (w.rows != x.rows || w.cols != 1) throw ShapeError("scale_rows: gate must be (rows x 1)");
        Tensor out(x.rows, x.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j) * w.at(i, 0);
        return record(std::move(out), {a, v}, [a, v](Tape& t, const std::vector<double>& g) {
            const Tensor &x = t.value(a), &w = t.value(v);
            if (t.needs(a)) {
                auto& da = t.grad_buf(a);
                for (int i = 0; i < x.rows; ++i)
                    for (int j = 0; j < x.cols; ++j)
                        da[static_cast<std::size_t>(i) * x.cols + j] +=
                            g[static_cast<std::size_t>(i) * x.cols + j] * w.at(i, 0);
            }
            if (t.needs(v)) {
                auto& dv = t.grad_buf(v);
                for (int i = 0; i < x.rows; ++i) {
                    double s = 0.0;
                    for (int j = 0; j < x.cols; ++j)
                        s += g[static_cast<std::size_t>(i) * x.cols + j] * x.at(i, j);
                    dv[static_cast<std::size_t>(i)] += s;
                }
            }
        });
    }

    // y_ij = a_ij * v_j with v a (C x 1) column gate.
    int scale_cols(int a, int v) {
        const Tensor &x = value(a), &w = value(v);
        if (w.rows != x.cols || w.cols != 1) throw ShapeError("scale_cols: gate must be (cols x 1)");
        Tensor out(x.rows, x.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j) * w.at(j, 0);
        return record(std::move(out), {a, v}, [a, v](Tape& t, const std::vector<double>& g) {
            const Tensor &x = t.value(a), &w = t.value(v);
            if (t.needs(a)) {
                auto& da = t.grad_buf(a);
                for (int i = 0; i < x.rows; ++i)
                    for (int j = 0; j < x.cols; ++j)
                        da[static_cast<std::size_t>(i) * x.cols + j] +=
                            g[static_cast<std::size_t>(i) * x.cols + j] * w.at(j, 0);
            }
            if (t.needs(v)) {
                auto& dv = t.grad_buf(v);
                for (int i = 0; i < x.rows; ++i)
                    for (int j = 0; j < x.cols; ++j)
                        dv[static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(i) * x.cols + j] * x.at(i, j);
            }
        });
    }

    // v / ||v||_2 for a projection vector (any shape, treated flat).
    int normalize_l2(int v) {
        const Tensor& x = value(v);
        double nrm2 = 0.0;
        for (double a : x.data) nrm2 += a * a;
        double nrm = std::sqrt(nrm2);
        if (nrm < 1e-12) throw DomainError("normalize_l2: degenerate (zero-norm) projection");
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] / nrm;
        return record(std::move(out), {v}, [v, nrm](Tape& t, const std::vector<double>& g) {
            const Tensor& x = t.value(v);
            double dot = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * x.data[i];
            auto& dv = t.grad_buf(v);
            double n3 = nrm * nrm * nrm;
            for (std::size_t i = 0; i < g.size(); ++i) dv[i] += g[i] / nrm - x.data[i] * dot / n3;
        });
    }

    int reshape(int a, int r, int c) {
        const Tensor& x = value(a);
        if (static_cast<std::size_t>(r) * c != x.data.size()) throw ShapeError("reshape: element count differs");
        Tensor out(r, c);
        out.data = x.data;
        return record(std::move(out), {a},
                      [a](Tape& t, const std::vector<double>& g) { t.accumulate(a, g); });
    }

    // Inverted dropout: kept entries scaled by 1/(1-rate) so evaluation is a
    // no-op. Identity (same node) when not training or rate == 0.
    int dropout(int a, double rate, Rng& rng, bool train) {
        if (rate < 0.0 || rate >= 1.0) throw DomainError("dropout: rate must lie in [0, 1)");
        if (!train || rate == 0.0) return a;
        const Tensor& x = value(a);
        std::vector<double> mask(x.data.size());
        const double keep_scale = 1.0 / (1.0 - rate);
        for (auto& m : mask) m = rng.uniform() >= rate ? keep_scale : 0.0;
        Tensor out(x.rows, x.cols);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = x.data[i] * mask[i];
        return record(std::move(out), {a}, [a, mask = std::move(mask)](Tape& t, const std::vector<double>& g) {
            auto& da = t.grad_buf(a);
            for (std::size_t i = 0; i < g.size(); ++i) da[i] += g[i] * mask[i];
        });
    }

    // Mean masked cross-entropy between row logits and integer labels, with
    // the softmax folded in (log-sum-exp form).
    int cross_entropy(int logits, const std::vector<int>& labels, const std::vector<char>& mask) {
        const Tensor& x = value(logits);
        if (static_cast<int>(labels.size()) != x.rows || static_cast<int>(mask.size()) != x.rows)
            throw ShapeError("cross_entropy: labels/mask length != logit rows");
        int batch = 0;
        double loss = 0.0;
        for (int i = 0; i < x.rows; ++i) {
            if (!mask[static_cast<std::size_t>(i)]) continue;
            int y = labels[static_cast<std::size_t>(i)];
            if (y < 0 || y >= x.cols) throw DomainError("cross_entropy: label out of range on masked row");
            double m = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < x.cols; ++j) m = std::max(m, x.at(i, j));
            double z = 0.0;
            for (int j = 0; j < x.cols; ++j) z += std::exp(x.at(i, j) - m);
            loss += m + std::log(z) - x.at(i, y);
            ++batch;
        }
        if (batch == 0) throw DomainError("cross_entropy: empty batch (mask selects no rows)");
        loss /= batch;
        return record(Tensor::scalar(loss), {logits},
                      [logits, labels, mask, batch](Tape& t, const std::vector<double>& g) {
                          const Tensor& x = t.value(logits);
                          auto& da = t.grad_buf(logits);
                          const double scale = g[0] / batch;
                          for (int i = 0; i < x.rows; ++i) {
                              if (!mask[static_cast<std::size_t>(i)]) continue;
                              double m = -std::numeric_limits<double>::infinity();
                              for (int j = 0; j < x.cols; ++j) m = std::max(m, x.at(i, j));
                              double z = 0.0;
                              for (int j = 0; j < x.cols; ++j) z += std::exp(x.at(i, j) - m);
                              for (int j = 0; j < x.cols; ++j) {
                                  double p = std::exp(x.at(i, j) - m) / z;
                                  double onehot = (j == labels[static_cast<std::size_t>(i)]) ? 1.0 : 0.0;
                                  da[static_cast<std::size_t>(i) * x.cols + j] += scale * (p - onehot);
                              }
                          }
                      });
    }

    // ----- backward --------------------------------------------------------

    // Seeds d(loss)/d(loss) = 1 and sweeps the tape once in reverse. Internal
    // gradient buffers are reset per call; external Tensor::grad accumulates.
    void backward(int loss) {
        const Tensor& l = value(loss);
        if (l.rows != 1 || l.cols != 1) throw DomainError("backward: loss must be a scalar tensor");
        for (auto& n : nodes_) {
            if (n.external) {
                if (n.external->requires_grad) n.external->ensure_grad();
            } else {
                n.grad.assign(n.owned.data.size(), 0.0);
            }
        }
        nodes_[static_cast<std::size_t>(loss)].seed();
        for (int id = loss; id >= 0; --id) {
            Node& n = nodes_[static_cast<std::size_t>(id)];
            if (!n.needs || !n.back) continue;
            const std::vector<double>& g = n.external ? n.external->grad : n.grad;
            n.back(*this, g);
        }
    }

private:
    struct Node {
        Tensor owned;
        Tensor* external = nullptr;
        std::vector<double> grad;
        bool needs = false;
        std::function<void(Tape&, const std::vector<double>&)> back;

        void seed() {
            if (external) {
                external->ensure_grad();
                external->grad[0] += 1.0;
            } else {
                grad[0] += 1.0;
            }
        }
    };

    std::vector<Node> nodes_;

    int last() const { return static_cast<int>(nodes_.size()) - 1; }

    bool needs(int id) const { return nodes_[static_cast<std::size_t>(id)].needs; }

    std::vector<double>& grad_buf(int id) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.external) {
            n.external->ensure_grad();
            return n.external->grad;
        }
        return n.grad;
    }

    void accumulate(int id, const std::vector<double>& g) {
        if (!needs(id)) return;
        auto& buf = grad_buf(id);
        for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
    }

    static void check_finite(const Tensor& t, const char* op) {
        if (!t.all_finite()) throw NumericError(std::string(op) + ": non-finite value produced");
    }

    int record(Tensor out, const std::vector<int>& inputs,
               std::function<void(Tape&, const std::vector<double>&)> back) {
        check_finite(out, "op");
        Node node;
        node.owned = std::move(out);
        for (int id : inputs)
            if (needs(id)) node.needs = true;
        if (node.needs) node.back = std::move(back);
        nodes_.push_back(std::move(node));
        return last();
    }

    // For ops whose backward reads their own output (tanh, softmax, sqrt).
    void rebind_backward(int id, std::function<void(Tape&, const std::vector<double>&)> back) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (n.needs) n.back = std::move(back);
    }
};

// ---------------------------------------------------------------------------
// Adam with decoupled weight decay (applied as lr * wd * param).

struct AdamConfig {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

struct AdamState {
    std::vector<double> m, v;
    long t = 0;
};

inline void adam_step(Tensor& param, const std::vector<double>& grad, AdamState& state,
                      const AdamConfig& cfg) {
    if (grad.size() != param.data.size()) throw ShapeError("adam_step: gradient shape mismatch");
    for (double g : grad)
        if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient");
    if (state.m.size() != grad.size()) {
        state.m.assign(grad.size(), 0.0);
        state.v.assign(grad.size(), 0.0);
        state.t = 0;
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < grad.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        double mhat = state.m[i] / bc1;
        double vhat = state.v[i] / bc2;
        param.data[i] -= cfg.lr * (mhat / (std::sqrt(vhat) + cfg.eps) + cfg.weight_decay * param.data[i]);
    }
}

}  // namespace gcnn
