#pragma once

#include "riskpar/ccd.hpp"
#include "riskpar/core.hpp"
#include "riskpar/jacobi.hpp"
#include "riskpar/newton.hpp"

namespace riskpar {

/// Runs the algorithm named in settings. Only CCD supports the
/// standard-deviation-based measure.
inline SolveOutcome solve(const CovarianceModel& cov, const RiskBudgets& b, const SolverSettings& settings,
                          const RiskMeasure& measure = RiskMeasure::volatility()) {
    switch (settings.algorithm) {
        case Algorithm::CCD:
            return ccd::solve(cov, b, settings, measure);
        case Algorithm::Newton:
            detail::require(measure.is_volatility(), "the Newton solver supports the volatility measure only");
            return newton::solve(cov, b, settings);
        case Algorithm::Jacobi:
            detail::require(measure.is_volatility(), "the Jacobi solver supports the volatility measure only");
            return jacobi::solve(cov, b, settings);
    }
    throw InputError("unknown algorithm");
}

}  // namespace riskpar
