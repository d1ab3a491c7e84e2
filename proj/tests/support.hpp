#pragma once

#include "oracles.hpp"
#include "riskpar/matrix_lab.hpp"

#include <cstdint>
#include <random>

namespace testing_support {

using riskpar::Index;
using riskpar::Matrix;
using riskpar::Vector;

inline oracle::Vec to_std(const Vector& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline oracle::Mat to_std(const Matrix& m) {
    oracle::Mat out(std::size_t(m.rows()), oracle::Vec(std::size_t(m.cols())));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out[std::size_t(i)][std::size_t(j)] = m(i, j);
    return out;
}

inline Vector to_eigen(const oracle::Vec& v) {
    Vector out(Index(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[Index(i)] = v[i];
    return out;
}

inline Matrix to_eigen(const oracle::Mat& m) {
    Matrix out(Index(m.size()), Index(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out(Index(i), Index(j)) = m[i][j];
    return out;
}

inline riskpar::CovarianceModel model(const oracle::Vec& vols, const oracle::Mat& rho) {
    return riskpar::CovarianceModel(to_eigen(vols), riskpar::CorrelationMatrix(to_eigen(rho)));
}

/// Flat Dirichlet(1, ..., 1) budgets.
inline riskpar::RiskBudgets dirichlet_budgets(Index n, std::mt19937_64& gen) {
    std::exponential_distribution<double> e(1.0);
    Vector b(n);
    for (Index i = 0; i < n; ++i) b[i] = e(gen) + 1e-3;
    b /= b.sum();
    return riskpar::RiskBudgets(b);
}

inline Vector random_vols(Index n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.05, 0.5);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = u(gen);
    return v;
}

inline Vector random_positive(Index n, std::mt19937_64& gen, double lo = 0.1, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = u(gen);
    return v;
}

}  // namespace testing_support
