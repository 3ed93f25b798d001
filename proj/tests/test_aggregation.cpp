#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcnn/aggregation.hpp"
#include "helpers.hpp"

using namespace gcnn;
using testutil::finite_diff;
using testutil::max_rel_err;
using testutil::random_tensor;
using testutil::random_undirected;

TEST_CASE("readout statistics") {
    Tensor x = Tensor::from_rows({{1, 2}, {3, 4}});
    Tape t;
    auto mean = t.value(readout(t, t.constant(x), {ReadoutStat::mean}));
    CHECK(mean.rows == 1);
    CHECK(mean.at(0, 0) == 2.0);
    CHECK(mean.at(0, 1) == 3.0);

    // single node: mean = sum = max = the row, variance = 0 exactly
    Tensor one = Tensor::from_rows({{7, -2}});
    Tape t2;
    auto all = t2.value(readout(t2, t2.constant(one),
                                {ReadoutStat::mean, ReadoutStat::sum, ReadoutStat::max, ReadoutStat::var}));
    CHECK(all.cols == 8);
    for (int j = 0; j < 2; ++j) {
        CHECK(all.at(0, 0 + j) == one.at(0, j));
        CHECK(all.at(0, 2 + j) == one.at(0, j));
        CHECK(all.at(0, 4 + j) == one.at(0, j));
        CHECK(all.at(0, 6 + j) == 0.0);
    }

    // statistic set is canonicalized: {var, mean} lays out mean then var
    Tape t3;
    auto vm = t3.value(readout(t3, t3.constant(x), {ReadoutStat::var, ReadoutStat::mean}));
    CHECK(vm.at(0, 0) == 2.0);  // mean of column 0
    CHECK(vm.at(0, 2) == 1.0);  // population variance of column 0

    Tape t4;
    CHECK_THROWS_AS(readout(t4, t4.constant(x), {}), DomainError);
    CHECK_THROWS_AS(readout(t4, t4.constant(Tensor(0, 2)), {ReadoutStat::mean}), DomainError);
}

TEST_CASE("readout is invariant under node permutation") {
    Rng rng(3);
    for (int it = 0; it < 10; ++it) {
        int n = 3 + static_cast<int>(rng.below(8));
        auto x = random_tensor(n, 4, rng);
        auto p = Permutation::random(n, rng);
        Tape ta, tb;
        std::vector<ReadoutStat> stats = {ReadoutStat::mean, ReadoutStat::sum, ReadoutStat::max,
                                          ReadoutStat::var};
        auto a = ta.value(readout(ta, ta.constant(x), stats));
        auto b = tb.value(readout(tb, tb.constant(permute_signal(x, p)), stats));
        // mean/sum/var involve reordered summation; max is exact
        CHECK(max_abs_diff(a, b) < 1e-12);
    }
}

TEST_CASE("readout scaling: mean is linear, variance is quadratic") {
    Rng rng(5);
    auto x = random_tensor(6, 3, rng);
    Tensor x2 = x;
    for (auto& v : x2.data) v *= 2.0;
    Tape ta, tb;
    auto m1 = ta.value(readout(ta, ta.constant(x), {ReadoutStat::mean}));
    auto v1 = ta.value(readout(ta, ta.constant(x), {ReadoutStat::var}));
    auto m2 = tb.value(readout(tb, tb.constant(x2), {ReadoutStat::mean}));
    auto v2 = tb.value(readout(tb, tb.constant(x2), {ReadoutStat::var}));
    for (int j = 0; j < 3; ++j) {
        CHECK(m2.at(0, j) == doctest::Approx(2.0 * m1.at(0, j)).epsilon(1e-14));
        CHECK(v2.at(0, j) == doctest::Approx(4.0 * v1.at(0, j)).epsilon(1e-14));
    }
}

TEST_CASE("fgsd on the two-node unit edge") {
    // Laplacian eigenpairs (0, 2); harmonic distance S(0,1) = 1. Bin width
    // 0.8 keeps the value away from a bin edge (it is exact only up to the
    // eigensolver's rounding).
    auto g = Graph::from_undirected_pairs(2, {{0, 1, 1.0}});
    auto h = fgsd_features(g, 5, 4.0);
    CHECK(h.cols == 5);
    CHECK(h.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));  // 1.0 / 0.8 -> bin 1
    CHECK(h.at(0, 0) == 0.0);
}

TEST_CASE("fgsd degenerate cases and invariants") {
    // disconnected pair: cutoff convention zeroes the cross-component
    // distance, all mass lands in bin 0
    auto h0 = fgsd_features(Graph::empty(2), 8, 4.0);
    CHECK(h0.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(fgsd_features(Graph::empty(1), 8, 4.0), DomainError);
    CHECK_THROWS_AS(fgsd_features(ring_graph(4), 8, 4.0), DomainError);  // directed

    // Random weights keep the pairwise distances away from bin boundaries,
    // where the histogram is (legitimately) discontinuous.
    Rng rng(7);
    for (int it = 0; it < 8; ++it) {
        int n = 4 + static_cast<int>(rng.below(10));
        auto g = random_undirected(n, 0.5, rng, /*weighted=*/true);
        auto p = Permutation::random(n, rng);
        auto a = fgsd_features(g, 16, 6.0);
        auto b = fgsd_features(permute(g, p), 16, 6.0);
        CHECK(max_abs_diff(a, b) < 1e-9);  // label-free set of pairwise distances

        double mass = 0.0;
        for (double v : a.data) mass += v;
        CHECK(std::abs(mass - 1.0) < 1e-12);
    }
}

TEST_CASE("dense head: degenerate weights and identity passthrough") {
    // zero head weights: equal logits, softmax would be uniform
    std::vector<DenseLayer> zero_head;
    zero_head.push_back({Tensor::zeros(3, 4), Tensor::zeros(1, 4)});
    Tape t;
    auto logits = t.value(head_forward(t, zero_head, t.constant(Tensor::from_rows({{1, 2, 3}}))));
    for (int j = 0; j < 4; ++j) CHECK(logits.at(0, j) == 0.0);

    // identity single layer with M = C: logits equal the readout vector
    std::vector<DenseLayer> id_head;
    id_head.push_back({Tensor::identity(3), Tensor::zeros(1, 3)});
    Tape t2;
    Tensor v = Tensor::from_rows({{0.5, -1.5, 2.0}});
    auto out = t2.value(head_forward(t2, id_head, t2.constant(v)));
    CHECK(max_abs_diff(out, v) == 0.0);
}

TEST_CASE("gradient check through readout plus head") {
    Rng rng(11);
    Tensor x = random_tensor(6, 3, rng);
    x.requires_grad = true;
    std::vector<DenseLayer> head;
    head.push_back({glorot_uniform(6, 4, rng), Tensor::zeros(1, 4)});
    head.push_back({glorot_uniform(4, 2, rng), Tensor::zeros(1, 2)});
    for (auto& l : head) {
        l.W.requires_grad = true;
        l.b.requires_grad = true;
    }
    std::vector<int> label = {1};
    std::vector<char> mask = {1};

    auto loss_value = [&]() {
        Tape t;
        int v = readout(t, t.leaf(&x), {ReadoutStat::mean, ReadoutStat::var});
        int logits = head_forward(t, head, v);
        return t.value(t.cross_entropy(logits, label, mask)).data[0];
    };
    x.zero_grad();
    for (auto& l : head) {
        l.W.zero_grad();
        l.b.zero_grad();
    }
    {
        Tape t;
        int v = readout(t, t.leaf(&x), {ReadoutStat::mean, ReadoutStat::var});
        int logits = head_forward(t, head, v);
        t.backward(t.cross_entropy(logits, label, mask));
    }
    auto check = [&](Tensor& param) {
        auto numeric = finite_diff(param, loss_value);
        CHECK(max_rel_err(param.grad, numeric) < 1e-4);
    };
    check(x);
    for (auto& l : head) {
        check(l.W);
        check(l.b);
    }
}
