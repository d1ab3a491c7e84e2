#pragma once

// Reference computations for tests. Deliberately written with plain loops
// over std::vector so they share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline Mat covariance(const Vec& vols, const Mat& rho) {
    const std::size_t n = vols.size();
    Mat s(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i][j] = vols[i] * rho[i][j] * vols[j];
    return s;
}

inline Mat constant_correlation(std::size_t n, double rho) {
    Mat m(n, Vec(n, rho));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec risk_contributions(const Mat& sigma, const Vec& x) {
    const Vec sx = matvec(sigma, x);
    const double var = dot(x, sx);
    Vec rc(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) rc[i] = x[i] * sx[i] / var;
    return rc;
}

inline double sup_gap(const Mat& sigma, const Vec& x, const Vec& b) {
    const Vec rc = risk_contributions(sigma, x);
    double g = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) g = std::max(g, std::abs(rc[i] - b[i]));
    return g;
}

inline Vec normalized(Vec x) {
    double s = 0.0;
    for (double v : x) s += v;
    for (double& v : x) v /= s;
    return x;
}

/// Positive root of a t^2 + lin t - k = 0 by bisection on [0, hi].
inline double bisect_positive_root(double a, double lin, double k) {
    auto f = [&](double t) { return a * t * t + lin * t - k; };
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Solves x_i (Sigma x)_i = b_i sigma(x) by the damped fixed point
/// x <- (1 - w) x + w b_i sigma(x) / (Sigma x)_i, then normalizes.
inline Vec rb_first_order_solve(const Mat& sigma, const Vec& b, double tol = 1e-12, double w = 0.5) {
    const std::size_t n = b.size();
    Vec x(n, 1.0 / double(n));
    for (int it = 0; it < 1000000; ++it) {
        const Vec sx = matvec(sigma, x);
        const double vol = std::sqrt(dot(x, sx));
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(x[i] * sx[i] - b[i] * vol));
        if (resid <= tol * vol) return normalized(x);
        for (std::size_t i = 0; i < n; ++i) x[i] = (1.0 - w) * x[i] + w * b[i] * vol / sx[i];
    }
    throw std::runtime_error("first-order oracle did not converge");
}

/// Minimizes f over [lo, hi]^2 by repeated grid refinement around the best node.
inline std::pair<double, double> grid_minimize_2d(const std::function<double(double, double)>& f, double lo,
                                                  double hi, int nodes = 201, int zooms = 12) {
    double x0 = lo, x1 = hi, y0 = lo, y1 = hi;
    double bx = lo, by = lo;
    for (int z = 0; z < zooms; ++z) {
        double best = INFINITY;
        const double hx = (x1 - x0) / (nodes - 1), hy = (y1 - y0) / (nodes - 1);
        for (int i = 0; i < nodes; ++i) {
            for (int j = 0; j < nodes; ++j) {
                const double x = x0 + i * hx, y = y0 + j * hy;
                const double v = f(x, y);
                if (v < best) {
                    best = v;
                    bx = x;
                    by = y;
                }
            }
        }
        x0 = std::max(lo, bx - 4 * hx);
        x1 = bx + 4 * hx;
        y0 = std::max(lo, by - 4 * hy);
        y1 = by + 4 * hy;
    }
    return {bx, by};
}

/// Gaussian elimination with partial pivoting.
inline Vec linear_solve(Mat a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
            b[i] -= m * b[k];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Central differences of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& y) {
    Vec g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(y[i]));
        Vec p = y, m = y;
        p[i] += h;
        m[i] -= h;
        g[i] = (f(p) - f(m)) / (2.0 * h);
    }
    return g;
}

/// Central differences of a vector function; column j is d/dy_j.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& g, const Vec& y) {
    const std::size_t n = y.size();
    Mat jac(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(y[j]));
        Vec p = y, m = y;
        p[j] += h;
        m[j] -= h;
        const Vec gp = g(p), gm = g(m);
        for (std::size_t i = 0; i < n; ++i) jac[i][j] = (gp[i] - gm[i]) / (2.0 * h);
    }
    return jac;
}

/// Cyclic Jacobi eigenvalue iteration for symmetric matrices; sorted ascending.
inline Vec symmetric_eigenvalues(Mat a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace oracle
