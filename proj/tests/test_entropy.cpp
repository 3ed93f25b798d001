#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcnn/entropy.hpp"
#include "gcnn/stats.hpp"
#include "helpers.hpp"

using namespace gcnn;
using testutil::random_undirected;

namespace {

// Exhaustive walk-enumeration oracle: depth-first expansion of every
// length-n walk along (binarized) edge direction. Independent of the
// matrix-power implementation.
Tensor brute_force_p(const Graph& g, const std::vector<int>& labels, int order) {
    int m = 0;
    for (int l : labels) m = std::max(m, l + 1);
    const int n = g.num_nodes();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges())
        if (e.weight > 0.0) adj[static_cast<std::size_t>(e.src)].push_back(e.dst);

    Tensor counts(m, m);
    std::function<void(int, int, int)> walk = [&](int start, int at, int remaining) {
        if (remaining == 0) {
            counts.at(labels[static_cast<std::size_t>(start)], labels[static_cast<std::size_t>(at)]) += 1.0;
            return;
        }
        for (int nb : adj[static_cast<std::size_t>(at)]) walk(start, nb, remaining - 1);
    };
    for (int v = 0; v < n; ++v) walk(v, v, order);

    Tensor p(m, m);
    for (int i = 0; i < m; ++i) {
        double total = 0.0;
        for (int j = 0; j < m; ++j) total += counts.at(i, j);
        for (int j = 0; j < m; ++j)
            p.at(i, j) = total > 0.0 ? counts.at(i, j) / total : std::numeric_limits<double>::quiet_NaN();
    }
    return p;
}

}  // namespace

TEST_CASE("perfect homophily: disjoint same-class edges give the identity P") {
    auto g = Graph::from_undirected_pairs(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    std::vector<int> labels = {0, 0, 1, 1};
    auto rep = edge_entropy(g, labels, 1);
    CHECK(rep.p.at(0, 0) == 1.0);
    CHECK(rep.p.at(0, 1) == 0.0);
    CHECK(rep.p.at(1, 1) == 1.0);
    CHECK(rep.p.at(1, 0) == 0.0);
    CHECK(*rep.h[0] == 0.0);
    CHECK(*rep.h[1] == 0.0);
}

TEST_CASE("triangle with labels A,A,B: hand-enumerated length-1 walks") {
    auto g = Graph::from_undirected_pairs(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    std::vector<int> labels = {0, 0, 1};
    auto rep = edge_entropy(g, labels, 1);
    // 4 walks start in A: 2 stay in A, 2 reach B; both walks from B reach A
    CHECK(rep.p.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rep.p.at(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rep.p.at(1, 0) == 1.0);
    CHECK(rep.p.at(1, 1) == 0.0);
    CHECK(*rep.h[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*rep.h[1] == 0.0);
}

TEST_CASE("uniform connectivity gives maximal entropy exactly") {
    // complete graph plus self-loops with equally sized classes: every row
    // of P is uniform, so H = 1 under the base-M normalization
    std::vector<EdgeTriple> pairs;
    for (int i = 0; i < 4; ++i) {
        pairs.push_back({i, i, 1.0});
        for (int j = i + 1; j < 4; ++j) pairs.push_back({i, j, 1.0});
    }
    auto g = Graph::from_undirected_pairs(4, pairs);
    std::vector<int> labels = {0, 0, 1, 1};
    auto rep = edge_entropy(g, labels, 1);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) CHECK(rep.p.at(i, j) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(*rep.h[i] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("matrix-power counting equals exhaustive walk enumeration") {
    Rng rng(7);
    for (int it = 0; it < 30; ++it) {
        int n = 2 + static_cast<int>(rng.below(7));  // up to 8 nodes
        bool directed = it % 3 == 2;
        auto g = directed ? testutil::random_directed(n, 0.4, rng) : random_undirected(n, 0.5, rng);
        std::vector<int> labels;
        int m = 2 + static_cast<int>(rng.below(2));
        for (int v = 0; v < n; ++v) labels.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(m))));
        labels[0] = 0;  // keep class ids contiguous enough
        for (int order = 1; order <= 3; ++order) {
            std::vector<bool> defined;
            auto p = interclass_probability(g, labels, order, &defined);
            auto oracle = brute_force_p(g, labels, order);
            REQUIRE(p.rows == oracle.rows);
            for (int i = 0; i < p.rows; ++i)
                for (int j = 0; j < p.cols; ++j) {
                    if (std::isnan(oracle.at(i, j))) {
                        CHECK(!defined[static_cast<std::size_t>(i)]);
                    } else {
                        CHECK(p.at(i, j) == doctest::Approx(oracle.at(i, j)).epsilon(1e-12));
                    }
                }
        }
    }
}

TEST_CASE("P rows are distributions and H is normalized") {
    Rng rng(11);
    for (int it = 0; it < 10; ++it) {
        int n = 5 + static_cast<int>(rng.below(10));
        auto g = random_undirected(n, 0.4, rng, /*weighted=*/false);
        std::vector<int> labels;
        for (int v = 0; v < n; ++v) labels.push_back(static_cast<int>(rng.below(3)));
        labels[0] = 0;
        labels[std::min(n - 1, 1)] = 1;
        labels[std::min(n - 1, 2)] = 2;
        for (int order : {1, 2}) {
            auto rep = edge_entropy(g, labels, order);
            for (int i = 0; i < rep.num_classes; ++i) {
                if (!rep.h[static_cast<std::size_t>(i)]) continue;
                double row = 0.0;
                for (int j = 0; j < rep.num_classes; ++j) {
                    double pij = rep.p.at(i, j);
                    CHECK(pij >= 0.0);
                    CHECK(pij <= 1.0);
                    row += pij;
                }
                CHECK(std::abs(row - 1.0) < 1e-12);
                CHECK(*rep.h[static_cast<std::size_t>(i)] >= 0.0);
                CHECK(*rep.h[static_cast<std::size_t>(i)] <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("entropy is invariant under node relabeling") {
    Rng rng(13);
    auto g = random_undirected(12, 0.4, rng, /*weighted=*/false);
    std::vector<int> labels = {0, 1, 0, 1, 2, 2, 0, 1, 2, 0, 1, 2};
    auto base = edge_entropy(g, labels, 2);

    auto p = Permutation::random(12, rng);
    auto gp = permute(g, p);
    std::vector<int> labels_p(12);
    for (int i = 0; i < 12; ++i)
        labels_p[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(p.map[static_cast<std::size_t>(i)])];
    auto moved = edge_entropy(gp, labels_p, 2);

    for (int i = 0; i < base.num_classes; ++i) {
        REQUIRE(base.h[static_cast<std::size_t>(i)].has_value() == moved.h[static_cast<std::size_t>(i)].has_value());
        if (base.h[static_cast<std::size_t>(i)])
            CHECK(*base.h[static_cast<std::size_t>(i)] == *moved.h[static_cast<std::size_t>(i)]);
        for (int j = 0; j < base.num_classes; ++j)
            if (base.h[static_cast<std::size_t>(i)]) CHECK(base.p.at(i, j) == moved.p.at(i, j));
    }
}

TEST_CASE("isolated class at order n reports missing, not zero") {
    auto g = Graph::from_undirected_pairs(3, {{0, 1, 1.0}});  // node 2 isolated
    std::vector<int> labels = {0, 0, 1};
    auto rep = edge_entropy(g, labels, 1);
    CHECK(!rep.h[1].has_value());
    CHECK(rep.undefined_classes == std::vector<int>{1});
    CHECK(std::isnan(rep.p.at(1, 0)));
    CHECK(rep.h[0].has_value());
}

TEST_CASE("entropy contract errors") {
    auto g = Graph::from_undirected_pairs(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(edge_entropy(g, {0, -1}, 1), DomainError);   // unlabeled node
    CHECK_THROWS_AS(edge_entropy(g, {0, 0}, 1), DomainError);    // single class
    CHECK_THROWS_AS(edge_entropy(g, {0, 1}, 0), DomainError);    // zero-length walks
    CHECK_THROWS_AS(edge_entropy(g, {0}, 1), ShapeError);        // label count mismatch
}

TEST_CASE("SBM expectation: H1 below 0.5 for sizes [100,100], p_in=.1, p_out=.01") {
    // expected block walk counts give p_ii ~ 0.908, H ~ 0.44
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        auto [g, labels] = sbm({100, 100}, 0.1, 0.01, seed);
        auto rep = edge_entropy(g, labels, 1);
        auto h = mean_entropy(rep);
        REQUIRE(h.has_value());
        CHECK(*h < 0.5);
    }
}

TEST_CASE("H1 decreases as the SBM p_in/p_out ratio grows (Spearman trend)") {
    const double p_out = 0.02;
    const double ratios[] = {1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> xs, ys;
    std::uint64_t seed = 100;
    for (double r : ratios) {
        for (int rep_i = 0; rep_i < 10; ++rep_i) {
            auto [g, labels] = sbm({40, 40}, p_out * r, p_out, seed++);
            auto rep = edge_entropy(g, labels, 1);
            auto h = mean_entropy(rep);
            REQUIRE(h.has_value());
            xs.push_back(r);
            ys.push_back(*h);
        }
    }
    double rho = spearman_rho(xs, ys);
    CHECK(rho < 0.0);
    CHECK(spearman_perm_pvalue_neg(xs, ys) < 0.01);
}
