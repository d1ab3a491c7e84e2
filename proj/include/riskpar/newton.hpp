#pragma once

// Newton's method for the self-concordant risk budgeting objective
//
//     f(y) = 1/2 y'Cy - sum_i b_i ln y_i,   y > 0,
//
// on the correlation matrix C. A damped phase takes steps scaled by
// 1/(1 + decrement) until the decrement drops below beta, after which full
// Newton steps are taken. The decrement is either the Newton decrement
// lambda_f = sqrt(g'H^{-1}g) or the cheaper proxy delta_f = ||dy / y||_inf.
// The covariance-space solution is recovered by dividing by volatilities.

#include "riskpar/core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

namespace riskpar::newton {

enum class DecrementKind { LambdaF, DeltaF };
enum class Phase { Damped, Quadratic };

struct NewtonConstants {
    double lambda_star = (3.0 - std::sqrt(5.0)) / 2.0;
    double beta = 0.95 * (3.0 - std::sqrt(5.0)) / 2.0;
    DecrementKind decrement_kind = DecrementKind::DeltaF;
    // Newton needs tens of iterations on valid instances; this is a pathology cap.
    std::size_t max_iterations = 500;
    // Step halvings allowed to keep the iterate in the positive orthant.
    int max_halvings = 60;

    void validate() const {
        riskpar::detail::require(0.0 < beta && beta < lambda_star && lambda_star < 1.0,
                        "Newton constants must satisfy 0 < beta < lambda_star < 1");
        riskpar::detail::require(max_iterations >= 1, "max_iterations must be at least 1");
    }
};

struct NewtonState {
    Vector y;
    std::size_t iteration = 0;
    Phase phase = Phase::Damped;
};

struct NewtonDirection {
    Vector delta;
    double lambda_f = 0.0;
};

/// Per-iteration record handed to an observer during solve().
struct StepInfo {
    std::size_t iteration = 0;   // index of the iterate the step started from
    Phase phase = Phase::Damped;  // phase used for this step
    double decrement = 0.0;      // selected decrement measure at the start point
    double lambda_f = 0.0;
    double step_scale = 1.0;     // fraction of delta actually subtracted
    int halvings = 0;
    double objective_before = 0.0;
    double objective_after = 0.0;
};

namespace detail {

inline void check_inputs(const Eigen::Ref<const Vector>& y, const CorrelationMatrix& c,
                         const RiskBudgets& b) {
    riskpar::detail::require_size(y.size(), c.size(), "iterate");
    riskpar::detail::require_size(b.size(), c.size(), "risk budgets");
    riskpar::detail::require_finite(y, "iterate");
    riskpar::detail::require_positive(y, "iterate");
}

}  // namespace detail

inline double objective(const Eigen::Ref<const Vector>& y, const CorrelationMatrix& c,
                        const RiskBudgets& b) {
    detail::check_inputs(y, c, b);
    return 0.5 * y.dot(c.matrix() * y) - b.values().dot(y.array().log().matrix());
}

/// Cy - b / y.
inline Vector gradient(const Eigen::Ref<const Vector>& y, const CorrelationMatrix& c,
                       const RiskBudgets& b) {
    detail::check_inputs(y, c, b);
    return c.matrix() * y - b.values().cwiseQuotient(y);
}

/// C + diag(b / y^2).
inline Matrix hessian(const Eigen::Ref<const Vector>& y, const CorrelationMatrix& c,
                      const RiskBudgets& b) {
    detail::check_inputs(y, c, b);
    Matrix h = c.matrix();
    h.diagonal().array() += b.values().array() / y.array().square();
    return h;
}

/// Solves H delta = g by Cholesky; lambda_f = sqrt(g' delta).
inline NewtonDirection direction(const Eigen::Ref<const Vector>& y, const CorrelationMatrix& c,
                                 const RiskBudgets& b) {
    const Vector g = gradient(y, c, b);
    Matrix h = c.matrix();
    h.diagonal().array() += b.values().array() / y.array().square();
    Eigen::LLT<Eigen::Ref<Matrix>> llt(h);
    if (llt.info() != Eigen::Success) {
        throw NumericError("Cholesky factorization of the Newton Hessian failed");
    }
    NewtonDirection d;
    d.delta = llt.solve(g);
    d.lambda_f = std::sqrt(std::max(0.0, g.dot(d.delta)));
    if (!d.delta.allFinite() || !std::isfinite(d.lambda_f)) {
        throw NumericError("Newton direction is not finite");
    }
    return d;
}

/// max_i |delta_i / y_i|.
inline double proxy_decrement(const Eigen::Ref<const Vector>& delta, const Eigen::Ref<const Vector>& y) {
    riskpar::detail::require_size(delta.size(), y.size(), "delta");
    riskpar::detail::require_positive(y, "iterate");
    if (delta.size() == 0) return 0.0;
    return delta.cwiseQuotient(y).cwiseAbs().maxCoeff();
}

/// One Newton step; optionally reports what happened through `info`.
inline NewtonState iterate(const NewtonState& state, const CorrelationMatrix& c, const RiskBudgets& b,
                           const NewtonConstants& constants, StepInfo* info = nullptr) {
    const NewtonDirection d = direction(state.y, c, b);
    const double decrement = constants.decrement_kind == DecrementKind::LambdaF
                                 ? d.lambda_f
                                 : proxy_decrement(d.delta, state.y);

    Phase phase = state.phase;
    if (phase == Phase::Quadratic && decrement > constants.lambda_star) phase = Phase::Damped;
    if (phase == Phase::Damped && decrement < constants.beta) phase = Phase::Quadratic;

    double scale = phase == Phase::Damped ? 1.0 / (1.0 + decrement) : 1.0;
    Vector next = state.y - scale * d.delta;
    int halvings = 0;
    while ((next.array() <= 0.0).any() && halvings < constants.max_halvings) {
        scale *= 0.5;
        ++halvings;
        next = state.y - scale * d.delta;
    }
    if ((next.array() <= 0.0).any() || !next.allFinite()) {
        throw NumericError("Newton step could not be kept inside the positive orthant");
    }

    if (info) {
        info->iteration = state.iteration;
        info->phase = phase;
        info->decrement = decrement;
        info->lambda_f = d.lambda_f;
        info->step_scale = scale;
        info->halvings = halvings;
        info->objective_before = objective(state.y, c, b);
        info->objective_after = objective(next, c, b);
    }
    return NewtonState{std::move(next), state.iteration + 1, phase};
}

/// Scaled equally weighted start: (1'C1)^{-1/2} * 1.
inline Vector initial_point(const CorrelationMatrix& c) {
    const double total = c.matrix().sum();
    if (!(total > 0.0)) throw NumericError("1'C1 must be positive");
    return Vector::Constant(c.size(), 1.0 / std::sqrt(total));
}

using StepObserver = std::function<void(const StepInfo&)>;

/// Solves the correlation-space problem and rescales by volatilities. Stops on
/// the same normalized risk contribution gap as the other solvers.
inline SolveOutcome solve(const CovarianceModel& cov, const RiskBudgets& b, const SolverSettings& settings,
                          const NewtonConstants& constants = {}, const StepObserver& observer = {}) {
    settings.validate();
    constants.validate();
    check_dimensions(cov, b);

    const auto start = std::chrono::steady_clock::now();
    const CorrelationMatrix& c = cov.corr();
    const std::size_t budget = std::min(settings.max_cycles, constants.max_iterations);

    SolveOutcome out;
    NewtonState state{initial_point(c), 0, Phase::Damped};
    Vector x = rescale_by_vol(state.y, cov.vols()).values();
    out.final_gap = convergence_gap(x, cov, b);
    try {
        while (out.final_gap > settings.tolerance && state.iteration < budget) {
            StepInfo info;
            state = iterate(state, c, b, constants, observer ? &info : nullptr);
            if (observer) observer(info);
            x = rescale_by_vol(state.y, cov.vols()).values();
            out.final_gap = convergence_gap(x, cov, b);
        }
    } catch (const NumericError& e) {
        out.diagnostic = e.what();
    }

    out.weights = std::move(x);
    out.cycles = state.iteration;
    out.converged = out.diagnostic.empty() && out.final_gap <= settings.tolerance;
    if (out.diagnostic.empty() && !out.converged) out.diagnostic = "iteration budget exhausted";
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace riskpar::newton
