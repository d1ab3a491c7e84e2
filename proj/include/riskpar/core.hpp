#pragma once

// Shared domain types for risk budgeting: correlation and covariance models,
// budgets, weights, solver settings and outcomes, and the risk-contribution
// arithmetic that every solver's convergence test is built on.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace riskpar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Malformed input: wrong shapes, nonfinite values, violated type invariants.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A value outside a function's mathematical domain (e.g. a nonpositive weight
// passed to a log barrier).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Floating point breakdown that valid inputs cannot produce.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a matrix fails the positive definiteness check; carries the
// zero-based index of the first nonpositive Cholesky pivot.
struct NotPositiveDefinite : InputError {
    explicit NotPositiveDefinite(Index pivot)
        : InputError("matrix is not positive definite: Cholesky pivot " +
                     std::to_string(pivot) + " is nonpositive"),
          pivot_index(pivot) {}
    Index pivot_index;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InputError(what);
}

inline void require_finite(const Eigen::Ref<const Vector>& v, std::string_view name) {
    if (!v.allFinite()) throw InputError(std::string(name) + " has nonfinite entries");
}

inline void require_positive(const Eigen::Ref<const Vector>& v, std::string_view name) {
    for (Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
            throw DomainError(std::string(name) + "[" + std::to_string(i) +
                              "] must be strictly positive");
        }
    }
}

inline void require_size(Index got, Index want, std::string_view name) {
    if (got != want) {
        throw InputError(std::string(name) + " has length " + std::to_string(got) +
                         ", expected " + std::to_string(want));
    }
}

// Index of the first pivot at which an unpivoted Cholesky factorization
// breaks down, or nullopt when the matrix is positive definite.
inline std::optional<Index> first_failed_pivot(const Matrix& a) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) return std::nullopt;
    // Slow path, only taken on failure: locate the pivot.
    const Index n = a.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0)) return j;
        l(j, j) = std::sqrt(d);
        for (Index i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
        }
    }
    return n - 1;
}

}  // namespace detail

/// Symmetric positive definite matrix with unit diagonal.
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(Matrix entries) : entries_(std::move(entries)) {
        const Index n = entries_.rows();
        detail::require(n >= 1, "correlation matrix must be non-empty");
        detail::require(entries_.cols() == n, "correlation matrix must be square");
        detail::require(entries_.allFinite(), "correlation matrix has nonfinite entries");
        for (Index i = 0; i < n; ++i) {
            if (std::abs(entries_(i, i) - 1.0) > 1e-12) {
                throw InputError("correlation matrix diagonal entry " + std::to_string(i) +
                                 " is not 1");
            }
            for (Index j = 0; j < i; ++j) {
                if (entries_(i, j) != entries_(j, i)) {
                    throw InputError("correlation matrix is not symmetric at (" +
                                     std::to_string(i) + ", " + std::to_string(j) + ")");
                }
            }
        }
        if (auto pivot = detail::first_failed_pivot(entries_)) throw NotPositiveDefinite(*pivot);
    }

    static CorrelationMatrix identity(Index n) { return CorrelationMatrix(Matrix::Identity(n, n)); }

    Index size() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }
    double operator()(Index i, Index j) const { return entries_(i, j); }

private:
    Matrix entries_;
};

/// Per-asset volatilities together with a correlation matrix. The dense
/// covariance Sigma_ij = vol_i * rho_ij * vol_j is formed once at construction.
class CovarianceModel {
public:
    CovarianceModel(Vector vols, CorrelationMatrix corr)
        : vols_(std::move(vols)), corr_(std::move(corr)) {
        detail::require_size(vols_.size(), corr_.size(), "vols");
        detail::require_finite(vols_, "vols");
        for (Index i = 0; i < vols_.size(); ++i) {
            detail::require(vols_[i] > 0.0, "vols[" + std::to_string(i) + "] must be positive");
        }
        cov_ = vols_.asDiagonal() * corr_.matrix() * vols_.asDiagonal();
        // exact symmetry regardless of evaluation order
        cov_ = cov_.selfadjointView<Eigen::Lower>();
    }

    /// Unit volatilities: the covariance is the correlation matrix itself.
    static CovarianceModel unit_vols(CorrelationMatrix corr) {
        const Index n = corr.size();
        return CovarianceModel(Vector::Ones(n), std::move(corr));
    }

    /// Splits a covariance matrix into volatilities and correlations.
    static CovarianceModel from_covariance(const Matrix& cov) {
        const Index n = cov.rows();
        detail::require(n >= 1 && cov.cols() == n, "covariance matrix must be square and non-empty");
        detail::require(cov.allFinite(), "covariance matrix has nonfinite entries");
        Vector vols(n);
        for (Index i = 0; i < n; ++i) {
            detail::require(cov(i, i) > 0.0,
                            "covariance diagonal entry " + std::to_string(i) + " must be positive");
            vols[i] = std::sqrt(cov(i, i));
        }
        Matrix rho(n, n);
        for (Index i = 0; i < n; ++i) {
            rho(i, i) = 1.0;
            for (Index j = 0; j < i; ++j) {
                if (cov(i, j) != cov(j, i)) {
                    throw InputError("covariance matrix is not symmetric at (" + std::to_string(i) +
                                     ", " + std::to_string(j) + ")");
                }
                rho(i, j) = rho(j, i) = cov(i, j) / (vols[i] * vols[j]);
            }
        }
        return CovarianceModel(std::move(vols), CorrelationMatrix(std::move(rho)));
    }

    Index size() const { return vols_.size(); }
    const Vector& vols() const { return vols_; }
    const CorrelationMatrix& corr() const { return corr_; }
    const Matrix& covariance() const { return cov_; }

private:
    Vector vols_;
    CorrelationMatrix corr_;
    Matrix cov_;
};

/// Strictly positive risk budgets summing to one.
class RiskBudgets {
public:
    explicit RiskBudgets(Vector b) : b_(std::move(b)) {
        detail::require(b_.size() >= 1, "risk budgets must be non-empty");
        detail::require_finite(b_, "risk budgets");
        for (Index i = 0; i < b_.size(); ++i) {
            detail::require(b_[i] > 0.0, "risk budget " + std::to_string(i) + " must be positive");
        }
        detail::require(std::abs(b_.sum() - 1.0) <= 1e-12, "risk budgets must sum to 1");
    }

    static RiskBudgets uniform(Index n) { return RiskBudgets(Vector::Constant(n, 1.0 / double(n))); }

    Index size() const { return b_.size(); }
    const Vector& values() const { return b_; }
    double operator[](Index i) const { return b_[i]; }

private:
    Vector b_;
};

/// Long-only portfolio weights, normalized to sum to one.
class Weights {
public:
    explicit Weights(Vector x) : x_(std::move(x)) {
        detail::require_finite(x_, "weights");
        detail::require_positive(x_, "weights");
        detail::require(std::abs(x_.sum() - 1.0) <= 1e-12, "weights must sum to 1");
    }

    Index size() const { return x_.size(); }
    const Vector& values() const { return x_; }
    double operator[](Index i) const { return x_[i]; }

private:
    Vector x_;
};

enum class RiskMeasureKind { Volatility, StdDevBased };

/// Either plain volatility, or R(x) = -x'mu + c * sigma(x).
class RiskMeasure {
public:
    static RiskMeasure volatility() { return RiskMeasure(); }

    static RiskMeasure stddev_based(Vector mu, double c) {
        detail::require(std::isfinite(c) && c > 0.0, "risk measure scale c must be positive");
        detail::require_finite(mu, "expected returns");
        RiskMeasure m;
        m.kind_ = RiskMeasureKind::StdDevBased;
        m.mu_ = std::move(mu);
        m.c_ = c;
        return m;
    }

    RiskMeasureKind kind() const { return kind_; }
    bool is_volatility() const { return kind_ == RiskMeasureKind::Volatility; }
    // Only meaningful for StdDevBased.
    const Vector& mu() const { return mu_; }
    double c() const { return c_; }

private:
    RiskMeasure() = default;
    RiskMeasureKind kind_ = RiskMeasureKind::Volatility;
    Vector mu_;
    double c_ = 0.0;
};

enum class Algorithm { CCD, Newton, Jacobi };

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::CCD: return "ccd";
        case Algorithm::Newton: return "newton";
        case Algorithm::Jacobi: return "jacobi";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
    if (name == "ccd") return Algorithm::CCD;
    if (name == "newton") return Algorithm::Newton;
    if (name == "jacobi") return Algorithm::Jacobi;
    return std::nullopt;
}

struct SolverSettings {
    double tolerance = 1e-8;
    std::size_t max_cycles = 10000;
    Algorithm algorithm = Algorithm::CCD;

    void validate() const {
        detail::require(std::isfinite(tolerance) && tolerance > 0.0, "tolerance must be positive");
        detail::require(max_cycles >= 1, "max_cycles must be at least 1");
    }
};

struct SolveOutcome {
    Vector weights;  // normalized; satisfies the Weights invariants when converged
    bool converged = false;
    std::size_t cycles = 0;
    double elapsed_seconds = 0.0;
    double final_gap = 0.0;
    std::string diagnostic;  // empty unless the solver stopped abnormally
};

inline void check_dimensions(const CovarianceModel& cov, const RiskBudgets& b) {
    detail::require_size(b.size(), cov.size(), "risk budgets");
}

/// sqrt(x' Sigma x).
inline double portfolio_volatility(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov) {
    detail::require_size(x.size(), cov.size(), "weights");
    detail::require_finite(x, "weights");
    return std::sqrt(x.dot(cov.covariance() * x));
}

/// x_i (Sigma x)_i / (x' Sigma x); sums to one.
inline Vector normalized_risk_contributions(const Eigen::Ref<const Vector>& x,
                                            const CovarianceModel& cov) {
    detail::require_size(x.size(), cov.size(), "weights");
    detail::require_finite(x, "weights");
    detail::require_positive(x, "weights");
    const Vector sx = cov.covariance() * x;
    return x.cwiseProduct(sx) / x.dot(sx);
}

/// Risk contributions under a general measure, normalized by R(x). For the
/// standard-deviation-based measure RC_i = x_i (-mu_i + c (Sigma x)_i / sigma(x)).
inline Vector normalized_risk_contributions(const Eigen::Ref<const Vector>& x,
                                            const CovarianceModel& cov,
                                            const RiskMeasure& measure) {
    if (measure.is_volatility()) return normalized_risk_contributions(x, cov);
    detail::require_size(x.size(), cov.size(), "weights");
    detail::require_size(measure.mu().size(), cov.size(), "expected returns");
    detail::require_finite(x, "weights");
    detail::require_positive(x, "weights");
    const Vector sx = cov.covariance() * x;
    const double vol = std::sqrt(x.dot(sx));
    const Vector marginal = -measure.mu() + (measure.c() / vol) * sx;
    const Vector rc = x.cwiseProduct(marginal);
    const double risk = rc.sum();
    if (!(risk > 0.0)) throw DomainError("risk measure is nonpositive at this portfolio");
    return rc / risk;
}

/// max_i |RC*_i - b_i|.
inline double convergence_gap(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov,
                              const RiskBudgets& b) {
    check_dimensions(cov, b);
    return (normalized_risk_contributions(x, cov) - b.values()).cwiseAbs().maxCoeff();
}

inline double convergence_gap(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov,
                              const RiskBudgets& b, const RiskMeasure& measure) {
    check_dimensions(cov, b);
    return (normalized_risk_contributions(x, cov, measure) - b.values()).cwiseAbs().maxCoeff();
}

inline Weights normalize(const Eigen::Ref<const Vector>& y) {
    detail::require(y.size() >= 1, "cannot normalize an empty vector");
    detail::require_finite(y, "vector");
    detail::require_positive(y, "vector");
    return Weights(y / y.sum());
}

/// Maps a correlation-space solution back to covariance space:
/// x_i = (y_i / vol_i) / sum_j (y_j / vol_j).
inline Weights rescale_by_vol(const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& vols) {
    detail::require_size(vols.size(), y.size(), "vols");
    detail::require_finite(vols, "vols");
    if ((vols.array() <= 0.0).any()) throw InputError("vols must be strictly positive");
    detail::require_finite(y, "vector");
    if ((y.array() <= 0.0).any()) throw InputError("vector must be strictly positive");
    return normalize(y.cwiseQuotient(vols));
}

/// Sum of squared deviations of normalized risk contributions from budgets;
/// the objective a constrained SQP formulation would minimize.
inline double sqp_residual(const Eigen::Ref<const Vector>& x, const CovarianceModel& cov,
                           const RiskBudgets& b) {
    check_dimensions(cov, b);
    return (normalized_risk_contributions(x, cov) - b.values()).squaredNorm();
}

}  // namespace riskpar
