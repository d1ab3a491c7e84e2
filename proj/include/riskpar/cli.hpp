#pragma once

// Command implementations behind the riskpar executable. Each returns the
// process exit code: 0 success, 1 input error, 2 solver did not converge.

#include "riskpar/bench.hpp"
#include "riskpar/io.hpp"
#include "riskpar/matrix_lab.hpp"
#include "riskpar/solve.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace riskpar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

enum class MatrixKind { Correlation, Covariance };

struct SolveRequest {
    std::string matrix_path;
    MatrixKind matrix_kind = MatrixKind::Correlation;
    std::optional<std::string> vols_path;     // required for a correlation matrix
    std::optional<std::string> budgets_path;  // uniform when absent
    std::string algorithm = "ccd";
    std::optional<std::string> mu_path;       // with c: standard-deviation-based measure
    std::optional<double> c;
    double tolerance = 1e-8;
    std::size_t max_cycles = 10000;
    std::optional<std::string> output_path;   // stdout when absent
};

struct GenRequest {
    Index n = 0;
    std::uint64_t seed = 1;
    std::string out_path;
};

struct BenchRequest {
    std::vector<Index> sizes;
    std::size_t trials = 0;
    std::vector<std::string> algorithms{"ccd", "newton", "jacobi"};
    std::uint64_t seed = 1;
    std::string out_path;
    std::optional<std::string> plot_path;  // <out stem>_plot.csv when absent
    bool no_parallel = false;
};

namespace detail {

inline double round_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline nlohmann::json to_json_array(const Vector& v, bool round) {
    auto arr = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(round ? round_sig12(v[i]) : v[i]);
    return arr;
}

inline std::string valid_algorithm_names() { return "ccd, newton, jacobi"; }

inline Algorithm algorithm_or_throw(const std::string& name) {
    if (auto a = parse_algorithm(name)) return *a;
    throw InputError("unknown algorithm '" + name + "'; valid names: " + valid_algorithm_names());
}

inline CovarianceModel load_model(const SolveRequest& req) {
    const Matrix m = io::read_matrix_csv(req.matrix_path);
    if (req.matrix_kind == MatrixKind::Covariance) {
        if (req.vols_path) throw InputError("--vols is only accepted with --matrix-kind corr");
        return CovarianceModel::from_covariance(m);
    }
    if (!req.vols_path) throw InputError("--vols is required with --matrix-kind corr");
    return CovarianceModel(io::read_vector_csv(*req.vols_path), CorrelationMatrix(m));
}

inline RiskMeasure load_measure(const SolveRequest& req, Index n) {
    if (!req.mu_path && !req.c) return RiskMeasure::volatility();
    if (!req.mu_path || !req.c) throw InputError("--mu and --c must be given together");
    Vector mu = io::read_vector_csv(*req.mu_path);
    riskpar::detail::require_size(mu.size(), n, "expected returns");
    return RiskMeasure::stddev_based(std::move(mu), *req.c);
}

}  // namespace detail

/// Solves one risk budgeting problem and writes the JSON report.
inline int cmd_solve(const SolveRequest& req, std::ostream& out, std::ostream& err) {
    try {
        const Algorithm algorithm = detail::algorithm_or_throw(req.algorithm);
        const CovarianceModel cov = detail::load_model(req);
        const Index n = cov.size();
        const RiskBudgets b = req.budgets_path ? RiskBudgets(io::read_vector_csv(*req.budgets_path))
                                               : RiskBudgets::uniform(n);
        check_dimensions(cov, b);
        const RiskMeasure measure = detail::load_measure(req, n);

        SolverSettings settings;
        settings.algorithm = algorithm;
        settings.tolerance = req.tolerance;
        settings.max_cycles = req.max_cycles;
        const SolveOutcome outcome = solve(cov, b, settings, measure);

        Vector rc = Vector::Zero(n);
        const bool positive = outcome.weights.allFinite() && (outcome.weights.array() > 0.0).all();
        if (positive) {
            try {
                rc = normalized_risk_contributions(outcome.weights, cov, measure);
            } catch (const DomainError&) {
                rc.setConstant(std::numeric_limits<double>::quiet_NaN());
            }
        }

        nlohmann::json report;
        report["algorithm"] = std::string(to_string(algorithm));
        report["converged"] = outcome.converged;
        report["cycles"] = outcome.cycles;
        report["elapsed_seconds"] = outcome.elapsed_seconds;
        report["final_gap"] = outcome.final_gap;
        report["weights"] = detail::to_json_array(outcome.weights, true);
        report["risk_contributions"] = detail::to_json_array(rc, true);

        const std::string text = report.dump(2) + "\n";
        if (req.output_path) {
            std::ofstream f(*req.output_path);
            if (!f) throw InputError("cannot open '" + *req.output_path + "' for writing");
            f << text;
        } else {
            out << text;
        }
        if (!outcome.converged) {
            err << "solver did not converge: " << outcome.diagnostic << " (gap " << outcome.final_gap << ")\n";
            return kExitNotConverged;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

/// Writes a seeded arithmetic-spectrum correlation matrix and reports its
/// extreme eigenvalues.
inline int cmd_gen(const GenRequest& req, std::ostream& out, std::ostream& err) {
    try {
        if (req.n < 2) throw InputError("n must be at least 2 (got " + std::to_string(req.n) + ")");
        const CorrelationMatrix corr = lab::simulate_correlation(req.n, req.seed);
        std::ofstream f(req.out_path);
        if (!f) throw InputError("cannot open '" + req.out_path + "' for writing");
        io::write_matrix_csv(f, corr.matrix());
        f.close();
        if (!f) throw InputError("failed writing '" + req.out_path + "'");

        Eigen::SelfAdjointEigenSolver<Matrix> es(corr.matrix(), Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        out << "n=" << req.n << " seed=" << req.seed << '\n'
            << "min_eigenvalue=" << io::detail::format17(lo) << '\n'
            << "max_eigenvalue=" << io::detail::format17(hi) << '\n'
            << "condition_number=" << io::detail::format17(hi / lo) << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

inline std::string default_plot_path(const std::string& out_path) {
    const auto dot = out_path.rfind('.');
    const auto slash = out_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out_path + "_plot.csv";
    return out_path.substr(0, dot) + "_plot" + out_path.substr(dot);
}

/// Runs the scaling study and writes the statistics and plot-series CSVs.
inline int cmd_bench(const BenchRequest& req, std::ostream& out, std::ostream& err) {
    try {
        bench::StudyConfig config;
        config.sizes = req.sizes;
        config.trials_per_size = req.trials;
        config.algorithms.clear();
        for (const auto& name : req.algorithms) config.algorithms.push_back(detail::algorithm_or_throw(name));
        config.seed_base = req.seed;
        config.parallel = !req.no_parallel;

        std::ofstream stats_file(req.out_path);
        if (!stats_file) throw InputError("cannot open '" + req.out_path + "' for writing");
        const std::string plot_path = req.plot_path.value_or(default_plot_path(req.out_path));
        std::ofstream plot_file(plot_path);
        if (!plot_file) throw InputError("cannot open '" + plot_path + "' for writing");

        const auto result = bench::scaling_study(config);
        bench::write_stats_csv(stats_file, result.stats);
        bench::write_plot_csv(plot_file, result.stats);
        bench::print_table(out, result.stats);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace riskpar::cli
