#pragma once

// Random correlation matrices with a prescribed spectrum.
//
// A = Q diag(lambda) Q' is formed from a Haar-random orthogonal Q. Its diagonal
// is then driven to one by Givens rotations (the Bendel-Mickey step): each
// rotation in the (p, q) plane, with a_pp and a_qq on opposite sides of one,
// sets a_pp to exactly one. Rotations are similarity transforms, so the
// spectrum is unchanged, and the trace argument guarantees a partner exists
// until every diagonal entry is one.

#include "riskpar/core.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace riskpar::lab {

/// Positive eigenvalues in arithmetic progression summing to n.
class SpectrumSpec {
public:
    explicit SpectrumSpec(Vector eigenvalues) : eig_(std::move(eigenvalues)) {
        const Index n = eig_.size();
        riskpar::detail::require(n >= 1, "spectrum must be non-empty");
        riskpar::detail::require_finite(eig_, "spectrum");
        riskpar::detail::require((eig_.array() > 0.0).all(), "eigenvalues must be positive");
        riskpar::detail::require(std::abs(eig_.sum() - double(n)) <= 1e-10,
                                 "eigenvalues of a correlation matrix must sum to n");
        for (Index i = 2; i < n; ++i) {
            const double step = eig_[i] - eig_[i - 1];
            riskpar::detail::require(std::abs(step - (eig_[1] - eig_[0])) <= 1e-12,
                                     "eigenvalues must be arithmetically spaced");
        }
    }

    Index size() const { return eig_.size(); }
    const Vector& eigenvalues() const { return eig_; }

private:
    Vector eig_;
};

/// Arithmetic spectrum lo, ..., 2 - lo (trace n). Requires 0 < lo <= 1.
inline SpectrumSpec arithmetic_spectrum(Index n, double lo) {
    riskpar::detail::require(n >= 2, "arithmetic spectrum needs n >= 2");
    riskpar::detail::require(lo > 0.0 && lo <= 1.0, "smallest eigenvalue must lie in (0, 1]");
    const double hi = 2.0 - lo;
    Vector eig(n);
    for (Index i = 0; i < n; ++i) eig[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return SpectrumSpec(std::move(eig));
}

/// lambda_i = 2i / (n + 1), i = 1..n.
inline SpectrumSpec arithmetic_spectrum(Index n) {
    riskpar::detail::require(n >= 2, "arithmetic spectrum needs n >= 2");
    Vector eig(n);
    for (Index i = 0; i < n; ++i) eig[i] = 2.0 * double(i + 1) / double(n + 1);
    return SpectrumSpec(std::move(eig));
}

/// Deterministic stream of uniform and Gaussian deviates.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    double uniform() { return uniform_(engine_); }
    double gaussian() { return normal_(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
inline Matrix random_orthogonal(Index n, SeededRng& rng) {
    riskpar::detail::require(n >= 2, "random_orthogonal needs n >= 2");
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (Index j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

namespace detail {

// Rotates plane (p, q) of the symmetric matrix a so that a_pp becomes one.
// Requires (a_pp - 1)(a_qq - 1) < 0. Writes rows and columns together to
// keep exact symmetry.
inline void unit_diagonal_rotation(Matrix& a, Index p, Index q) {
    const double app = a(p, p), aqq = a(q, q), apq = a(p, q);
    const double disc = apq * apq - (app - 1.0) * (aqq - 1.0);
    const double sgn = apq >= 0.0 ? 1.0 : -1.0;
    const double t = (apq + sgn * std::sqrt(disc)) / (aqq - 1.0);
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = c * t;

    const Index n = a.rows();
    for (Index k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const double akp = a(k, p), akq = a(k, q);
        const double new_kp = c * akp - s * akq;
        const double new_kq = s * akp + c * akq;
        a(k, p) = a(p, k) = new_kp;
        a(k, q) = a(q, k) = new_kq;
    }
    const double new_pq = c * s * (app - aqq) + (c * c - s * s) * apq;
    a(p, q) = a(q, p) = new_pq;
    a(q, q) = s * s * app + 2.0 * c * s * apq + c * c * aqq;
    a(p, p) = 1.0;
}

}  // namespace detail

/// Correlation matrix whose eigenvalues are the given spectrum.
inline CorrelationMatrix correlation_from_spectrum(const SpectrumSpec& spec, SeededRng& rng) {
    const Index n = spec.size();
    riskpar::detail::require(n >= 2, "correlation_from_spectrum needs n >= 2");
    const Matrix q = random_orthogonal(n, rng);
    Matrix a = q * spec.eigenvalues().asDiagonal() * q.transpose();
    a = (0.5 * (a + a.transpose())).eval();

    // Entries this close to one are left for the final snap.
    constexpr double unit_tol = 1e-15;
    // Largest one-sided leftover accepted after pairing runs out (rounding only).
    constexpr double leftover_tol = 1e-10;
    for (Index rotations = 0; rotations < n; ++rotations) {
        Index below = -1, above = -1;
        for (Index i = 0; i < n && (below < 0 || above < 0); ++i) {
            const double dev = a(i, i) - 1.0;
            if (below < 0 && dev < -unit_tol) below = i;
            if (above < 0 && dev > unit_tol) above = i;
        }
        if (below < 0 || above < 0) break;
        // Fix the entry nearer to one; the partner keeps its side.
        const bool below_nearer = std::abs(a(below, below) - 1.0) <= std::abs(a(above, above) - 1.0);
        if (below_nearer) {
            detail::unit_diagonal_rotation(a, below, above);
        } else {
            detail::unit_diagonal_rotation(a, above, below);
        }
    }
    for (Index i = 0; i < n; ++i) {
        if (std::abs(a(i, i) - 1.0) > leftover_tol) {
            throw std::logic_error("Givens pairing left diagonal entry " + std::to_string(i) +
                                   " away from one");
        }
        a(i, i) = 1.0;
    }
    return CorrelationMatrix(std::move(a));
}

/// Seeded correlation matrix with the default arithmetic spectrum.
inline CorrelationMatrix simulate_correlation(Index n, std::uint64_t seed) {
    SeededRng rng(seed);
    return correlation_from_spectrum(arithmetic_spectrum(n), rng);
}

}  // namespace riskpar::lab
