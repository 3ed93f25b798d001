#pragma once

// Small statistics helpers for reporting and trend assertions.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gcnn/errors.hpp"
#include "gcnn/rng.hpp"

namespace gcnn {

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw DomainError("mean_of: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator); 0 for a single observation.
inline double stddev_of(const std::vector<double>& v) {
    if (v.empty()) throw DomainError("stddev_of: empty sample");
    if (v.size() == 1) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

// Spearman rank correlation with average ranks for ties.
inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw DomainError("spearman_rho: need matched samples, n >= 3");
    return detail::pearson(detail::average_ranks(x), detail::average_ranks(y));
}

// One-sided permutation p-value for the hypothesis rho < 0: the fraction of
// label permutations whose rho is <= the observed one. Deterministic per seed.
inline double spearman_perm_pvalue_neg(const std::vector<double>& x, const std::vector<double>& y,
                                       int permutations = 20000, std::uint64_t seed = 1234567) {
    double observed = spearman_rho(x, y);
    Rng rng(seed);
    std::vector<double> shuffled = y;
    int at_most = 0;
    for (int i = 0; i < permutations; ++i) {
        rng.shuffle(shuffled);
        if (spearman_rho(x, shuffled) <= observed) ++at_most;
    }
    return (at_most + 1.0) / (permutations + 1.0);
}

}  // namespace gcnn
