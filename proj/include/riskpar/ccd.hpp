#pragma once

// Cyclical coordinate descent for risk budgeting portfolios.
//
// Minimizes sigma(x) - sum_i b_i ln x_i (or -x'mu + c sigma(x) - sum_i b_i ln x_i)
// one coordinate at a time. Each coordinate step takes the positive root of
//
//     sigma_i^2 t^2 + (Sigma x)_{-i} t - b_i sigma(x) = 0,
//
// where (Sigma x)_{-i} = (Sigma x)_i - x_i sigma_i^2 and sigma(x) is held at the
// current iterate. The step minimizes a quadratic majorizer of the objective
// along the coordinate, so the objective never increases.
//
// Sigma x and sigma(x) are cached and refreshed incrementally in O(n) per
// coordinate, making a full cycle O(n^2).

#include "riskpar/core.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace riskpar::ccd {

/// Iterate plus cached Sigma x and sigma(x).
struct CcdState {
    Vector x;
    Vector sigma_x;
    double sigma_port = 0.0;
    std::size_t cycle = 0;

    /// Builds a state from a positive (unnormalized) start point with fresh caches.
    static CcdState from_weights(Vector x0, const CovarianceModel& cov) {
        riskpar::detail::require_size(x0.size(), cov.size(), "start point");
        riskpar::detail::require_finite(x0, "start point");
        riskpar::detail::require_positive(x0, "start point");
        CcdState s;
        s.x = std::move(x0);
        s.refresh(cov);
        return s;
    }

    void refresh(const CovarianceModel& cov) {
        sigma_x.noalias() = cov.covariance() * x;
        sigma_port = std::sqrt(x.dot(sigma_x));
    }
};

namespace detail {

// Positive root of a t^2 + lin t - k = 0 with a > 0, k > 0. Uses the
// cancellation-free form when lin > 0.
inline double positive_root(double a, double lin, double k) {
    const double disc = std::sqrt(lin * lin + 4.0 * a * k);
    if (lin > 0.0) return 2.0 * k / (lin + disc);
    return (-lin + disc) / (2.0 * a);
}

inline void check_index(Index i, Index n) {
    riskpar::detail::require(i >= 0 && i < n, "asset index " + std::to_string(i) + " out of range");
}

inline double checked(double v, Index i) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw NumericError("coordinate update for asset " + std::to_string(i) +
                           " produced a non-finite or nonpositive value");
    }
    return v;
}

}  // namespace detail

/// Closed-form coordinate minimizer for the volatility measure.
inline double update_weight(Index i, const CcdState& state, const CovarianceModel& cov,
                            const RiskBudgets& b) {
    detail::check_index(i, cov.size());
    const double var_i = cov.covariance()(i, i);
    const double off = state.sigma_x[i] - state.x[i] * var_i;
    return detail::checked(detail::positive_root(var_i, off, b[i] * state.sigma_port), i);
}

/// Coordinate update for R(x) = -x'mu + c sigma(x):
/// c sigma_i^2 t^2 + (c (Sigma x)_{-i} - mu_i sigma(x)) t - b_i sigma(x) = 0.
inline double update_weight_stddev(Index i, const CcdState& state, const CovarianceModel& cov,
                                   const RiskBudgets& b, const RiskMeasure& measure) {
    riskpar::detail::require(measure.kind() == RiskMeasureKind::StdDevBased,
                             "update_weight_stddev requires a standard-deviation-based measure");
    riskpar::detail::require(measure.c() > 0.0, "risk measure scale c must be positive");
    riskpar::detail::require_size(measure.mu().size(), cov.size(), "expected returns");
    detail::check_index(i, cov.size());
    const double c = measure.c();
    const double var_i = cov.covariance()(i, i);
    const double off = state.sigma_x[i] - state.x[i] * var_i;
    const double lin = c * off - measure.mu()[i] * state.sigma_port;
    return detail::checked(detail::positive_root(c * var_i, lin, b[i] * state.sigma_port), i);
}

/// Sets x_i to new_xi and updates the caches with one column axpy:
///   Sigma x~ = Sigma x + Sigma_{.,i} (x~_i - x_i)
///   sigma^2(x~) = sigma^2(x) - 2 x_i (Sigma x)_i + x_i^2 sigma_i^2
///               + 2 x~_i (Sigma x~)_i - x~_i^2 sigma_i^2
/// A negative radicand (rounding only) falls back to a dense refresh.
inline void apply_update(Index i, double new_xi, CcdState& state, const CovarianceModel& cov) {
    detail::check_index(i, cov.size());
    riskpar::detail::require(std::isfinite(new_xi) && new_xi > 0.0, "new weight must be positive");
    const auto& sigma = cov.covariance();
    const double var_i = sigma(i, i);
    const double old_xi = state.x[i];
    const double old_row = state.sigma_x[i];

    state.sigma_x.noalias() += (new_xi - old_xi) * sigma.col(i);
    state.x[i] = new_xi;

    const double radicand = state.sigma_port * state.sigma_port - 2.0 * old_xi * old_row +
                            old_xi * old_xi * var_i + 2.0 * new_xi * state.sigma_x[i] -
                            new_xi * new_xi * var_i;
    if (radicand > 0.0) {
        state.sigma_port = std::sqrt(radicand);
    } else {
        state.refresh(cov);
    }
}

/// Functional form of apply_update for callers that keep states immutable.
inline CcdState with_update(Index i, double new_xi, CcdState state, const CovarianceModel& cov) {
    apply_update(i, new_xi, state, cov);
    return state;
}

/// sigma(x) - sum b_i ln x_i (or -x'mu + c sigma(x) - sum b_i ln x_i) at an
/// unnormalized iterate.
inline double lagrangian(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov,
                         const RiskBudgets& b, const RiskMeasure& measure = RiskMeasure::volatility()) {
    riskpar::detail::require_positive(x, "weights");
    const double vol = portfolio_volatility(x, cov);
    const double barrier = b.values().dot(x.array().log().matrix());
    if (measure.is_volatility()) return vol - barrier;
    return -x.dot(measure.mu()) + measure.c() * vol - barrier;
}

struct CcdOptions {
    // Dense recomputation of the caches every this many cycles.
    std::size_t refresh_every = 50;
};

/// Runs one full ascending sweep over all coordinates.
inline void run_cycle(CcdState& state, const CovarianceModel& cov, const RiskBudgets& b,
                      const RiskMeasure& measure) {
    const Index n = cov.size();
    const bool vol_only = measure.is_volatility();
    for (Index i = 0; i < n; ++i) {
        const double xi = vol_only ? update_weight(i, state, cov, b)
                                   : update_weight_stddev(i, state, cov, b, measure);
        apply_update(i, xi, state, cov);
    }
    ++state.cycle;
}

/// Solves the risk budgeting problem by cyclical coordinate descent from the
/// equally weighted portfolio. Convergence is tested once per cycle on the
/// normalized weights; non-convergence is reported, not thrown.
inline SolveOutcome solve(const CovarianceModel& cov, const RiskBudgets& b,
                          const SolverSettings& settings,
                          const RiskMeasure& measure = RiskMeasure::volatility(),
                          const CcdOptions& options = {}) {
    settings.validate();
    check_dimensions(cov, b);
    if (!measure.is_volatility()) riskpar::detail::require_size(measure.mu().size(), cov.size(), "expected returns");

    const auto start = std::chrono::steady_clock::now();
    const Index n = cov.size();
    const bool vol_only = measure.is_volatility();
    SolveOutcome out;

    // Cheap O(n) gap from the caches; confirmed densely before reporting success.
    auto cached_gap = [&](const CcdState& s) {
        Vector rc = s.x.cwiseProduct(s.sigma_x);
        if (!vol_only) rc = s.x.cwiseProduct(-measure.mu() + (measure.c() / s.sigma_port) * s.sigma_x);
        const double total = rc.sum();
        if (!(total > 0.0)) return std::numeric_limits<double>::infinity();
        return (rc / total - b.values()).cwiseAbs().maxCoeff();
    };
    auto dense_gap = [&](const Vector& x) {
        return vol_only ? convergence_gap(x, cov, b) : convergence_gap(x, cov, b, measure);
    };

    CcdState state = CcdState::from_weights(Vector::Constant(n, 1.0 / double(n)), cov);
    out.final_gap = std::numeric_limits<double>::infinity();
    try {
        out.final_gap = dense_gap(state.x);
        while (out.final_gap > settings.tolerance && state.cycle < settings.max_cycles) {
            run_cycle(state, cov, b, measure);
            if (options.refresh_every > 0 && state.cycle % options.refresh_every == 0) state.refresh(cov);
            if (!state.x.allFinite() || !(state.sigma_port > 0.0)) {
                out.diagnostic = "iterate left the finite positive domain";
                break;
            }
            if (cached_gap(state) <= settings.tolerance) {
                state.refresh(cov);
                out.final_gap = dense_gap(state.x);
            }
        }
        if (out.final_gap > settings.tolerance && out.diagnostic.empty() && state.x.allFinite()) {
            out.final_gap = dense_gap(state.x);
        }
    } catch (const NumericError& e) {
        out.diagnostic = e.what();
    } catch (const DomainError& e) {
        // the standard-deviation-based risk became nonpositive
        out.diagnostic = e.what();
    }

    out.cycles = state.cycle;
    out.converged = out.diagnostic.empty() && out.final_gap <= settings.tolerance;
    out.weights = (state.x.allFinite() && (state.x.array() > 0.0).all()) ? Vector(state.x / state.x.sum())
                                                                           : state.x;
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.diagnostic.empty() && !out.converged) out.diagnostic = "cycle budget exhausted";
    return out;
}

}  // namespace riskpar::ccd
