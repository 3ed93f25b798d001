#pragma once

// Shift, polynomial graph filtering, graph Fourier transform, and the
// vertex/spectral duality path. The GFT comes from the eigendecomposition
// A = igft * diag(lambda) * gft; symmetric adjacencies route to the Jacobi
// solver (orthogonal basis), general ones to Hessenberg QR plus a complex
// inverse. Column scaling is solver-native unit norm; no phase canonicalization.

#include <complex>
#include <limits>
#include <vector>

#include "gcnn/eig.hpp"
#include "gcnn/errors.hpp"
#include "gcnn/graph.hpp"
#include "gcnn/tensor.hpp"

namespace gcnn {

struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> data;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, {0.0, 0.0}) {}

    std::complex<double>& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    std::complex<double> at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

inline ComplexMatrix cmatmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) throw ShapeError("cmatmul: inner dimensions differ");
    ComplexMatrix y(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            std::complex<double> v = a.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) y.at(i, j) += v * b.at(k, j);
        }
    return y;
}

inline ComplexMatrix to_complex(const Tensor& x) {
    ComplexMatrix y(x.rows, x.cols);
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] = {x.data[i], 0.0};
    return y;
}

// Eigenvalue gap below this marks the spectrum as (numerically) repeated;
// the decomposition is still returned but duality checks should skip it.
inline constexpr double kRepeatedGapTol = 1e-10;

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;
    ComplexMatrix gft;   // analysis: x_hat = gft * x
    ComplexMatrix igft;  // synthesis: columns are eigenvectors of A
    double min_eigen_gap = std::numeric_limits<double>::infinity();
    // Set when the eigenvalue gap drops below kRepeatedGapTol or the
    // inverse pair fails its own identity check: the decomposition is
    // returned but cannot be trusted for duality.
    bool repeated_warning = false;
    double condition_estimate = 1.0;
    double inverse_residual = 0.0;  // ||igft * gft - I||_max
};

struct FilterCoeffs {
    std::vector<double> alpha;  // alpha[k] multiplies A^k; degree K = size-1

    explicit FilterCoeffs(std::vector<double> a) : alpha(std::move(a)) {
        if (alpha.empty()) throw DomainError("FilterCoeffs: empty coefficient list");
        for (double v : alpha)
            if (!std::isfinite(v)) throw NumericError("FilterCoeffs: non-finite coefficient");
    }

    int degree() const { return static_cast<int>(alpha.size()) - 1; }

    std::complex<double> eval(std::complex<double> lambda) const {
        std::complex<double> acc = alpha.back();
        for (int k = static_cast<int>(alpha.size()) - 2; k >= 0; --k) acc = acc * lambda + alpha[static_cast<std::size_t>(k)];
        return acc;
    }
};

namespace detail {

inline double cnorm1(const ComplexMatrix& m) {
    double best = 0.0;
    for (int j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows; ++i) s += std::abs(m.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace detail

inline Spectrum spectrum(const Graph& g, int cap = kDenseCap) {
    const int n = g.num_nodes();
    if (n < 1) throw DomainError("spectrum: empty graph");
    if (n > cap) throw DomainError("spectrum: vertex count exceeds dense cap");
    auto a = g.dense(cap);

    Spectrum s;
    if (is_symmetric_dense(n, a)) {
        SymEig se = sym_eigen(n, a);
        s.eigenvalues.resize(static_cast<std::size_t>(n));
        s.igft = ComplexMatrix(n, n);
        s.gft = ComplexMatrix(n, n);
        for (int k = 0; k < n; ++k) {
            s.eigenvalues[static_cast<std::size_t>(k)] = {se.values[static_cast<std::size_t>(k)], 0.0};
            for (int i = 0; i < n; ++i) {
                double v = se.vectors[static_cast<std::size_t>(i) * n + k];
                s.igft.at(i, k) = {v, 0.0};
                s.gft.at(k, i) = {v, 0.0};  // orthogonal basis: inverse is the transpose
            }
        }
        s.condition_estimate = 1.0;
    } else {
        GenEig ge = gen_eigen(n, a);
        s.eigenvalues = ge.values;
        s.igft = ComplexMatrix(n, n);
        s.igft.data = ge.vectors;
        s.gft = ComplexMatrix(n, n);
        s.gft.data = complex_inverse(n, ge.vectors);
        s.condition_estimate = detail::cnorm1(s.igft) * detail::cnorm1(s.gft);
    }

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            s.min_eigen_gap = std::min(s.min_eigen_gap,
                                       std::abs(s.eigenvalues[static_cast<std::size_t>(i)] -
                                                s.eigenvalues[static_cast<std::size_t>(j)]));
    auto prod = cmatmul(s.igft, s.gft);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.inverse_residual = std::max(s.inverse_residual, std::abs(prod.at(i, j) - (i == j ? 1.0 : 0.0)));
    s.repeated_warning = (n > 1 && s.min_eigen_gap < kRepeatedGapTol) || s.inverse_residual > 1e-9;
    return s;
}

inline double spectral_radius(const Graph& g, int cap = kDenseCap) {
    const int n = g.num_nodes();
    if (n < 1) throw DomainError("spectral_radius: empty graph");
    if (n > cap) throw DomainError("spectral_radius: vertex count exceeds dense cap");
    auto a = g.dense(cap);
    double r = 0.0;
    if (is_symmetric_dense(n, a)) {
        for (double v : sym_eigen(n, a).values) r = std::max(r, std::abs(v));
    } else {
        for (auto v : gen_eigen(n, a).values) r = std::max(r, std::abs(v));
    }
    return r;
}

// Divide all weights by |lambda_max| so the spectral radius becomes 1.
inline Graph normalize_spectral(const Graph& g, int cap = kDenseCap) {
    double r = spectral_radius(g, cap);
    if (r < 1e-12) throw NumericError("normalize_spectral: degenerate spectrum (|lambda_max| ~ 0)");
    std::vector<EdgeTriple> trip = g.edges();
    for (auto& e : trip) e.weight /= r;
    return Graph(g.num_nodes(), g.directed(), std::move(trip));
}

// sum_k alpha_k A^k x by Horner-style iterated sparse shifts.
inline Tensor poly_filter(const Graph& g, const FilterCoeffs& c, const Tensor& x) {
    if (x.rows != g.num_nodes()) throw ShapeError("poly_filter: signal rows != vertex count");
    if (static_cast<int>(c.alpha.size()) > g.num_nodes())
        throw DomainError("poly_filter: filter degree must be below the vertex count");
    Tensor y(x.rows, x.cols);
    const int kmax = c.degree();
    for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] = c.alpha[static_cast<std::size_t>(kmax)] * x.data[i];
    for (int k = kmax - 1; k >= 0; --k) {
        y = shift(g, y);
        const double a = c.alpha[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < x.data.size(); ++i) y.data[i] += a * x.data[i];
    }
    return y;
}

inline ComplexMatrix gft_apply(const Spectrum& s, const Tensor& x) {
    if (x.rows != s.gft.cols) throw ShapeError("gft_apply: signal rows != spectrum size");
    return cmatmul(s.gft, to_complex(x));
}

inline ComplexMatrix igft_apply(const Spectrum& s, const ComplexMatrix& xhat) {
    if (xhat.rows != s.igft.cols) throw ShapeError("igft_apply: rows != spectrum size");
    return cmatmul(s.igft, xhat);
}

// GFT^-1 * g(Lambda) * GFT * x, truncated to real. A large imaginary
// residue signals a defective or ill-conditioned spectrum.
inline Tensor spectral_filter(const Spectrum& s, const FilterCoeffs& c, const Tensor& x) {
    ComplexMatrix xhat = gft_apply(s, x);
    for (int i = 0; i < xhat.rows; ++i) {
        std::complex<double> gl = c.eval(s.eigenvalues[static_cast<std::size_t>(i)]);
        for (int j = 0; j < xhat.cols; ++j) xhat.at(i, j) *= gl;
    }
    ComplexMatrix y = igft_apply(s, xhat);
    double max_re = 0.0, max_im = 0.0;
    for (const auto& v : y.data) {
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
    }
    if (max_im > 1e-8 * std::max(1.0, max_re))
        throw NumericError("spectral_filter: duality violation (imaginary residue above tolerance)");
    Tensor out(y.rows, y.cols);
    for (std::size_t i = 0; i < y.data.size(); ++i) out.data[i] = y.data[i].real();
    return out;
}

}  // namespace gcnn
