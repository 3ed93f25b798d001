#pragma once

// Dense eigensolvers on row-major buffers. Symmetric matrices go through
// cyclic Jacobi (orthogonal eigenvectors); general real matrices go through
// Householder reduction to Hessenberg form followed by Francis double-shift
// QR iteration with eigenvector backsubstitution (the classic EISPACK
// hqr2 scheme). Desk-scale only: O(n^3), no blocking.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "gcnn/errors.hpp"

namespace gcnn {

struct SymEig {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // row-major n x n; column k pairs with values[k]
};

struct GenEig {
    std::vector<std::complex<double>> values;
    std::vector<std::complex<double>> vectors;  // row-major n x n; column k pairs with values[k]
};

inline bool is_symmetric_dense(int n, const std::vector<double>& a) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a[static_cast<std::size_t>(i) * n + j] != a[static_cast<std::size_t>(j) * n + i]) return false;
    return true;
}

// Cyclic Jacobi with the usual small-rotation threshold schedule.
inline SymEig sym_eigen(int n, std::vector<double> a, int max_sweeps = 100) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    std::vector<double> b(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] = A(i, i);

    auto rotate = [](double& g, double& h, double s, double tau) {
        double gg = g, hh = h;
        g = gg - s * (hh + gg * tau);
        h = hh + s * (gg - hh * tau);
    };

    bool converged = (n <= 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double sm = 0.0;
        for (int ip = 0; ip < n - 1; ++ip)
            for (int iq = ip + 1; iq < n; ++iq) sm += std::abs(A(ip, iq));
        if (sm == 0.0) {
            converged = true;
            break;
        }
        double tresh = sweep < 3 ? 0.2 * sm / (static_cast<double>(n) * n) : 0.0;
        for (int ip = 0; ip < n - 1; ++ip) {
            for (int iq = ip + 1; iq < n; ++iq) {
                double g = 100.0 * std::abs(A(ip, iq));
                if (sweep > 3 && std::abs(d[static_cast<std::size_t>(ip)]) + g == std::abs(d[static_cast<std::size_t>(ip)]) &&
                    std::abs(d[static_cast<std::size_t>(iq)]) + g == std::abs(d[static_cast<std::size_t>(iq)])) {
                    A(ip, iq) = 0.0;
                } else if (std::abs(A(ip, iq)) > tresh) {
                    double h = d[static_cast<std::size_t>(iq)] - d[static_cast<std::size_t>(ip)];
                    double t;
                    if (std::abs(h) + g == std::abs(h)) {
                        t = A(ip, iq) / h;
                    } else {
                        double theta = 0.5 * h / A(ip, iq);
                        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                        if (theta < 0.0) t = -t;
                    }
                    double c = 1.0 / std::sqrt(1.0 + t * t);
                    double s = t * c;
                    double tau = s / (1.0 + c);
                    h = t * A(ip, iq);
                    z[static_cast<std::size_t>(ip)] -= h;
                    z[static_cast<std::size_t>(iq)] += h;
                    d[static_cast<std::size_t>(ip)] -= h;
                    d[static_cast<std::size_t>(iq)] += h;
                    A(ip, iq) = 0.0;
                    for (int j = 0; j < ip; ++j) rotate(A(j, ip), A(j, iq), s, tau);
                    for (int j = ip + 1; j < iq; ++j) rotate(A(ip, j), A(j, iq), s, tau);
                    for (int j = iq + 1; j < n; ++j) rotate(A(ip, j), A(iq, j), s, tau);
                    for (int j = 0; j < n; ++j) rotate(V(j, ip), V(j, iq), s, tau);
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            b[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i)];
            d[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
            z[static_cast<std::size_t>(i)] = 0.0;
        }
    }
    if (!converged) {
        double sm = 0.0;
        for (int ip = 0; ip < n - 1; ++ip)
            for (int iq = ip + 1; iq < n; ++iq) sm += std::abs(A(ip, iq));
        if (sm != 0.0) throw NumericError("sym_eigen: Jacobi iteration did not converge");
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return d[static_cast<std::size_t>(i)] < d[static_cast<std::size_t>(j)]; });
    SymEig out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        out.values[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        for (int i = 0; i < n; ++i)
            out.vectors[static_cast<std::size_t>(i) * n + k] = V(i, order[static_cast<std::size_t>(k)]);
    }
    return out;
}

namespace detail {

// Complex division by Smith's algorithm.
inline void cdiv(double xr, double xi, double yr, double yi, double& outr, double& outi) {
    if (std::abs(yr) > std::abs(yi)) {
        double r = yi / yr;
        double dv = yr + r * yi;
        outr = (xr + r * xi) / dv;
        outi = (xi - r * xr) / dv;
    } else {
        double r = yr / yi;
        double dv = yi + r * yr;
        outr = (r * xr + xi) / dv;
        outi = (r * xi - xr) / dv;
    }
}

// Householder reduction to upper Hessenberg form, accumulating the
// orthogonal transformation in v.
inline void orthes(int n, std::vector<double>& h, std::vector<double>& v) {
    auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
    const int low = 0, high = n - 1;
    std::vector<double> ort(static_cast<std::size_t>(n), 0.0);

    for (int m = low + 1; m <= high - 1; ++m) {
        double scale = 0.0;
        for (int i = m; i <= high; ++i) scale += std::abs(H(i, m - 1));
        if (scale != 0.0) {
            double hh = 0.0;
            for (int i = high; i >= m; --i) {
                ort[static_cast<std::size_t>(i)] = H(i, m - 1) / scale;
                hh += ort[static_cast<std::size_t>(i)] * ort[static_cast<std::size_t>(i)];
            }
            double g = std::sqrt(hh);
            if (ort[static_cast<std::size_t>(m)] > 0.0) g = -g;
            hh -= ort[static_cast<std::size_t>(m)] * g;
            ort[static_cast<std::size_t>(m)] -= g;

            for (int j = m; j < n; ++j) {
                double f = 0.0;
                for (int i = high; i >= m; --i) f += ort[static_cast<std::size_t>(i)] * H(i, j);
                f /= hh;
                for (int i = m; i <= high; ++i) H(i, j) -= f * ort[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i <= high; ++i) {
                double f = 0.0;
                for (int j = high; j >= m; --j) f += ort[static_cast<std::size_t>(j)] * H(i, j);
                f /= hh;
                for (int j = m; j <= high; ++j) H(i, j) -= f * ort[static_cast<std::size_t>(j)];
            }
            ort[static_cast<std::size_t>(m)] *= scale;
            H(m, m - 1) = scale * g;
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) V(i, j) = (i == j ? 1.0 : 0.0);
    for (int m = high - 1; m >= low + 1; --m) {
        if (H(m, m - 1) != 0.0) {
            for (int i = m + 1; i <= high; ++i) ort[static_cast<std::size_t>(i)] = H(i, m - 1);
            for (int j = m; j <= high; ++j) {
                double g = 0.0;
                for (int i = m; i <= high; ++i) g += ort[static_cast<std::size_t>(i)] * V(i, j);
                g = (g / ort[static_cast<std::size_t>(m)]) / H(m, m - 1);
                for (int i = m; i <= high; ++i) V(i, j) += g * ort[static_cast<std::size_t>(i)];
            }
        }
    }
}

// Francis double-shift QR iteration on a Hessenberg matrix with
// accumulation of transformations and eigenvector backsubstitution.
inline void hqr2(int nn, std::vector<double>& hbuf, std::vector<double>& vbuf,
                 std::vector<double>& d, std::vector<double>& e) {
    auto H = [&](int i, int j) -> double& { return hbuf[static_cast<std::size_t>(i) * nn + j]; };
    auto V = [&](int i, int j) -> double& { return vbuf[static_cast<std::size_t>(i) * nn + j]; };

    int n = nn - 1;
    const int low = 0, high = nn - 1;
    const double eps = std::pow(2.0, -52.0);
    double exshift = 0.0;
    double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;

    double norm = 0.0;
    for (int i = 0; i < nn; ++i) {
        for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));
    }

    int iter = 0;
    while (n >= low) {
        int l = n;
        while (l > low) {
            s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
            if (s == 0.0) s = norm;
            if (std::abs(H(l, l - 1)) < eps * s) break;
            --l;
        }

        if (l == n) {
            // One root found.
            H(n, n) += exshift;
            d[static_cast<std::size_t>(n)] = H(n, n);
            e[static_cast<std::size_t>(n)] = 0.0;
            --n;
            iter = 0;
        } else if (l == n - 1) {
            // Two roots found.
            w = H(n, n - 1) * H(n - 1, n);
            p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
            q = p * p + w;
            z = std::sqrt(std::abs(q));
            H(n, n) += exshift;
            H(n - 1, n - 1) += exshift;
            x = H(n, n);
            if (q >= 0) {
                // Real pair.
                z = (p >= 0) ? p + z : p - z;
                d[static_cast<std::size_t>(n - 1)] = x + z;
                d[static_cast<std::size_t>(n)] = d[static_cast<std::size_t>(n - 1)];
                if (z != 0.0) d[static_cast<std::size_t>(n)] = x - w / z;
                e[static_cast<std::size_t>(n - 1)] = 0.0;
                e[static_cast<std::size_t>(n)] = 0.0;
                x = H(n, n - 1);
                s = std::abs(x) + std::abs(z);
                p = x / s;
                q = z / s;
                r = std::sqrt(p * p + q * q);
                p /= r;
                q /= r;
                for (int j = n - 1; j < nn; ++j) {
                    z = H(n - 1, j);
                    H(n - 1, j) = q * z + p * H(n, j);
                    H(n, j) = q * H(n, j) - p * z;
                }
                for (int i = 0; i <= n; ++i) {
                    z = H(i, n - 1);
                    H(i, n - 1) = q * z + p * H(i, n);
                    H(i, n) = q * H(i, n) - p * z;
                }
                for (int i = low; i <= high; ++i) {
                    z = V(i, n - 1);
                    V(i, n - 1) = q * z + p * V(i, n);
                    V(i, n) = q * V(i, n) - p * z;
                }
            } else {
                // Complex pair.
                d[static_cast<std::size_t>(n - 1)] = x + p;
                d[static_cast<std::size_t>(n)] = x + p;
                e[static_cast<std::size_t>(n - 1)] = z;
                e[static_cast<std::size_t>(n)] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet; form shift.
            x = H(n, n);
            y = 0.0;
            w = 0.0;
            if (l < n) {
                y = H(n - 1, n - 1);
                w = H(n, n - 1) * H(n - 1, n);
            }

            if (iter == 10) {
                // Wilkinson's ad hoc shift.
                exshift += x;
                for (int i = low; i <= n; ++i) H(i, i) -= x;
                s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
                x = y = 0.75 * s;
                w = -0.4375 * s * s;
            }
            if (iter == 30) {
                s = (y - x) / 2.0;
                s = s * s + w;
                if (s > 0) {
                    s = std::sqrt(s);
                    if (y < x) s = -s;
                    s = x - w / ((y - x) / 2.0 + s);
                    for (int i = low; i <= n; ++i) H(i, i) -= s;
                    exshift += s;
                    x = y = w = 0.964;
                }
            }
            ++iter;
            if (iter > 100) throw NumericError("gen_eigen: QR iteration did not converge");

            // Look for two consecutive small sub-diagonal elements.
            int m = n - 2;
            while (m >= l) {
                z = H(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
                q = H(m + 1, m + 1) - z - r - s;
                r = H(m + 2, m + 1);
                s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
                    eps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1)))))
                    break;
                --m;
            }
            for (int i = m + 2; i <= n; ++i) {
                H(i, i - 2) = 0.0;
                if (i > m + 2) H(i, i - 3) = 0.0;
            }

            // Double QR step on rows l..n, columns m..n.
            for (int k = m; k <= n - 1; ++k) {
                bool notlast = (k != n - 1);
                if (k != m) {
                    p = H(k, k - 1);
                    q = H(k + 1, k - 1);
                    r = notlast ? H(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = std::sqrt(p * p + q * q + r * r);
                if (p < 0) s = -s;
                if (s != 0) {
                    if (k != m)
                        H(k, k - 1) = -s * x;
                    else if (l != m)
                        H(k, k - 1) = -H(k, k - 1);
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for (int j = k; j < nn; ++j) {
                        p = H(k, j) + q * H(k + 1, j);
                        if (notlast) {
                            p += r * H(k + 2, j);
                            H(k + 2, j) -= p * z;
                        }
                        H(k, j) -= p * x;
                        H(k + 1, j) -= p * y;
                    }
                    for (int i = 0; i <= std::min(n, k + 3); ++i) {
                        p = x * H(i, k) + y * H(i, k + 1);
                        if (notlast) {
                            p += z * H(i, k + 2);
                            H(i, k + 2) -= p * r;
                        }
                        H(i, k) -= p;
                        H(i, k + 1) -= p * q;
                    }
                    for (int i = low; i <= high; ++i) {
                        p = x * V(i, k) + y * V(i, k + 1);
                        if (notlast) {
                            p += z * V(i, k + 2);
                            V(i, k + 2) -= p * r;
                        }
                        V(i, k) -= p;
                        V(i, k + 1) -= p * q;
                    }
                }
            }
        }
    }

    // Backsubstitution: eigenvectors of the triangular form.
    if (norm == 0.0) return;

    double cr, ci;
    for (n = nn - 1; n >= 0; --n) {
        p = d[static_cast<std::size_t>(n)];
        q = e[static_cast<std::size_t>(n)];

        if (q == 0) {
            // Real vector.
            int l = n;
            H(n, n) = 1.0;
            for (int i = n - 1; i >= 0; --i) {
                w = H(i, i) - p;
                r = 0.0;
                for (int j = l; j <= n; ++j) r += H(i, j) * H(j, n);
                if (e[static_cast<std::size_t>(i)] < 0.0) {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if (e[static_cast<std::size_t>(i)] == 0.0) {
                        H(i, n) = (w != 0.0) ? -r / w : -r / (eps * norm);
                    } else {
                        // Solve the 2x2 real block.
                        x = H(i, i + 1);
                        y = H(i + 1, i);
                        q = (d[static_cast<std::size_t>(i)] - p) * (d[static_cast<std::size_t>(i)] - p) +
                            e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
                        t = (x * s - z * r) / q;
                        H(i, n) = t;
                        H(i + 1, n) = (std::abs(x) > std::abs(z)) ? (-r - w * t) / x : (-s - y * t) / z;
                    }
                    t = std::abs(H(i, n));
                    if ((eps * t) * t > 1) {
                        for (int j = i; j <= n; ++j) H(j, n) /= t;
                    }
                }
            }
        } else if (q < 0) {
            // Complex vector (stored in columns n-1 and n).
            int l = n - 1;
            if (std::abs(H(n, n - 1)) > std::abs(H(n - 1, n))) {
                H(n - 1, n - 1) = q / H(n, n - 1);
                H(n - 1, n) = -(H(n, n) - p) / H(n, n - 1);
            } else {
                cdiv(0.0, -H(n - 1, n), H(n - 1, n - 1) - p, q, cr, ci);
                H(n - 1, n - 1) = cr;
                H(n - 1, n) = ci;
            }
            H(n, n - 1) = 0.0;
            H(n, n) = 1.0;
            for (int i = n - 2; i >= 0; --i) {
                double ra = 0.0, sa = 0.0, vr, vi;
                for (int j = l; j <= n; ++j) {
                    ra += H(i, j) * H(j, n - 1);
                    sa += H(i, j) * H(j, n);
                }
                w = H(i, i) - p;
                if (e[static_cast<std::size_t>(i)] < 0.0) {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if (e[static_cast<std::size_t>(i)] == 0) {
                        cdiv(-ra, -sa, w, q, cr, ci);
                        H(i, n - 1) = cr;
                        H(i, n) = ci;
                    } else {
                        // Solve the complex 2x2 block.
                        x = H(i, i + 1);
                        y = H(i + 1, i);
                        vr = (d[static_cast<std::size_t>(i)] - p) * (d[static_cast<std::size_t>(i)] - p) +
                             e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)] - q * q;
                        vi = (d[static_cast<std::size_t>(i)] - p) * 2.0 * q;
                        if (vr == 0.0 && vi == 0.0) {
                            vr = eps * norm *
                                 (std::abs(w) + std::abs(q) + std::abs(x) + std::abs(y) + std::abs(z));
                        }
                        cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi, cr, ci);
                        H(i, n - 1) = cr;
                        H(i, n) = ci;
                        if (std::abs(x) > (std::abs(z) + std::abs(q))) {
                            H(i + 1, n - 1) = (-ra - w * H(i, n - 1) + q * H(i, n)) / x;
                            H(i + 1, n) = (-sa - w * H(i, n) - q * H(i, n - 1)) / x;
                        } else {
                            cdiv(-r - y * H(i, n - 1), -s - y * H(i, n), z, q, cr, ci);
                            H(i + 1, n - 1) = cr;
                            H(i + 1, n) = ci;
                        }
                    }
                    t = std::max(std::abs(H(i, n - 1)), std::abs(H(i, n)));
                    if ((eps * t) * t > 1) {
                        for (int j = i; j <= n; ++j) {
                            H(j, n - 1) /= t;
                            H(j, n) /= t;
                        }
                    }
                }
            }
        }
    }

    // Back transformation to eigenvectors of the original matrix.
    for (int j = nn - 1; j >= low; --j) {
        for (int i = low; i <= high; ++i) {
            z = 0.0;
            for (int k = low; k <= std::min(j, high); ++k) z += V(i, k) * H(k, j);
            V(i, j) = z;
        }
    }
}

}  // namespace detail

inline GenEig gen_eigen(int n, std::vector<double> a) {
    GenEig out;
    if (n == 0) return out;
    if (n == 1) {
        out.values = {std::complex<double>(a[0], 0.0)};
        out.vectors = {std::complex<double>(1.0, 0.0)};
        return out;
    }
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> d(static_cast<std::size_t>(n), 0.0), e(static_cast<std::size_t>(n), 0.0);
    detail::orthes(n, a, v);
    detail::hqr2(n, a, v, d, e);

    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.assign(static_cast<std::size_t>(n) * n, {0.0, 0.0});
    auto V = [&](int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; };
    auto set_col = [&](int k, std::complex<double> lambda, bool conj_pair, int re_col, int im_col) {
        out.values[static_cast<std::size_t>(k)] = lambda;
        double nrm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double re = V(i, re_col);
            double im = (im_col >= 0) ? (conj_pair ? -V(i, im_col) : V(i, im_col)) : 0.0;
            out.vectors[static_cast<std::size_t>(i) * n + k] = {re, im};
            nrm2 += re * re + im * im;
        }
        double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < n; ++i) out.vectors[static_cast<std::size_t>(i) * n + k] *= inv;
    };
    int k = 0;
    while (k < n) {
        if (e[static_cast<std::size_t>(k)] == 0.0) {
            set_col(k, {d[static_cast<std::size_t>(k)], 0.0}, false, k, -1);
            ++k;
        } else {
            // Conjugate pair: u + i*w stored in columns k (real) and k+1 (imag).
            set_col(k, {d[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)]}, false, k, k + 1);
            set_col(k + 1, {d[static_cast<std::size_t>(k + 1)], e[static_cast<std::size_t>(k + 1)]}, true, k, k + 1);
            k += 2;
        }
    }
    return out;
}

// Solve A X = B for complex square A via LU with partial pivoting.
// B holds m right-hand sides as columns (row-major n x m); returns X.
inline std::vector<std::complex<double>> complex_solve(int n, std::vector<std::complex<double>> a,
                                                       std::vector<std::complex<double>> b, int m) {
    auto A = [&](int i, int j) -> std::complex<double>& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto B = [&](int i, int j) -> std::complex<double>& { return b[static_cast<std::size_t>(i) * m + j]; };
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A(col, col));
        for (int i = col + 1; i < n; ++i) {
            double mag = std::abs(A(i, col));
            if (mag > best) {
                best = mag;
                piv = i;
            }
        }
        if (best < 1e-300) throw NumericError("complex_solve: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
            for (int j = 0; j < m; ++j) std::swap(B(piv, j), B(col, j));
        }
        for (int i = col + 1; i < n; ++i) {
            std::complex<double> f = A(i, col) / A(col, col);
            if (f == 0.0) continue;
            A(i, col) = 0.0;
            for (int j = col + 1; j < n; ++j) A(i, j) -= f * A(col, j);
            for (int j = 0; j < m; ++j) B(i, j) -= f * B(col, j);
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = 0; j < m; ++j) {
            std::complex<double> s = B(i, j);
            for (int kk = i + 1; kk < n; ++kk) s -= A(i, kk) * B(kk, j);
            B(i, j) = s / A(i, i);
        }
    }
    return b;
}

inline std::vector<std::complex<double>> complex_inverse(int n, const std::vector<std::complex<double>>& a) {
    std::vector<std::complex<double>> id(static_cast<std::size_t>(n) * n, {0.0, 0.0});
    for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i) * n + i] = 1.0;
    return complex_solve(n, a, std::move(id), n);
}

}  // namespace gcnn
