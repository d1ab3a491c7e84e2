#pragma once

// Jacobi power-method fixed point for risk budgeting:
//
//     x_{k+1,i} = (b_i / beta_i(x_k)) / sum_j (b_j / beta_j(x_k)),
//     beta_i(x) = (Sigma x)_i / sigma^2(x).
//
// The plain iteration is kept on purpose. It fails on many ill-conditioned
// problems, and callers get that as converged = false.

#include "riskpar/core.hpp"

#include <chrono>
#include <cstddef>
#include <limits>
#include <string>

namespace riskpar::jacobi {

/// Betas of each asset with respect to portfolio x; sum_i x_i beta_i = 1.
inline Vector betas(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov) {
    riskpar::detail::require_size(x.size(), cov.size(), "weights");
    riskpar::detail::require_finite(x, "weights");
    riskpar::detail::require_positive(x, "weights");
    const Vector sx = cov.covariance() * x;
    return sx / x.dot(sx);
}

/// One Jacobi step; throws NumericError when some beta is nonpositive.
inline Vector iterate(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov, const RiskBudgets& b) {
    check_dimensions(cov, b);
    const Vector beta = betas(x, cov);
    for (Index i = 0; i < beta.size(); ++i) {
        if (!(beta[i] > 0.0)) {
            throw NumericError("beta of asset " + std::to_string(i) + " is nonpositive");
        }
    }
    const Vector raw = b.values().cwiseQuotient(beta);
    return raw / raw.sum();
}

struct JacobiOptions {
    // Halt once the gap has not improved for this many consecutive iterations.
    std::size_t stall_window = 100;
};

inline SolveOutcome solve(const CovarianceModel& cov, const RiskBudgets& b, const SolverSettings& settings,
                          const JacobiOptions& options = {}) {
    settings.validate();
    check_dimensions(cov, b);
    const auto start = std::chrono::steady_clock::now();
    const Index n = cov.size();

    SolveOutcome out;
    Vector x = Vector::Constant(n, 1.0 / double(n));
    out.final_gap = convergence_gap(x, cov, b);
    double best_gap = out.final_gap;
    std::size_t since_best = 0;
    std::size_t k = 0;
    try {
        while (out.final_gap > settings.tolerance && k < settings.max_cycles) {
            x = iterate(x, cov, b);
            ++k;
            if (!x.allFinite() || (x.array() <= 0.0).any()) {
                out.diagnostic = "iterate left the finite positive domain";
                break;
            }
            out.final_gap = convergence_gap(x, cov, b);
            if (out.final_gap < best_gap) {
                best_gap = out.final_gap;
                since_best = 0;
            } else if (++since_best >= options.stall_window) {
                out.diagnostic = "gap did not decrease for " + std::to_string(options.stall_window) +
                                 " iterations (oscillation)";
                break;
            }
        }
    } catch (const NumericError& e) {
        out.diagnostic = e.what();
    }

    out.weights = std::move(x);
    out.cycles = k;
    out.converged = out.diagnostic.empty() && out.final_gap <= settings.tolerance;
    if (out.diagnostic.empty() && !out.converged) out.diagnostic = "iteration budget exhausted";
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace riskpar::jacobi
