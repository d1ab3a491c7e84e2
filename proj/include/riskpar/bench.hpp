#pragma once

// Solver comparison on simulated correlation matrices: every algorithm sees
// the same matrices, uniform budgets, unit volatilities, equally weighted
// start and tolerance. Only the solve is timed.

#include "riskpar/matrix_lab.hpp"
#include "riskpar/solve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace riskpar::bench {

struct TrialRecord {
    Algorithm algorithm = Algorithm::CCD;
    Index n = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    double elapsed_seconds = 0.0;
    std::size_t cycles_or_iterations = 0;
    double final_gap = 0.0;
};

struct BenchStats {
    Algorithm algorithm = Algorithm::CCD;
    Index n = 0;
    double p_s = 0.0;  // percent
    double t_mean = 0.0;
    double t_max = 0.0;
    std::optional<double> t_mean_converged;
    std::size_t trials = 0;
};

/// Times one solve on a given correlation matrix (unit vols, uniform budgets).
inline TrialRecord run_trial_on(Algorithm algorithm, const CorrelationMatrix& corr, std::uint64_t seed,
                                SolverSettings settings) {
    settings.algorithm = algorithm;
    const auto cov = CovarianceModel::unit_vols(corr);
    const auto b = RiskBudgets::uniform(corr.size());
    const auto start = std::chrono::steady_clock::now();
    const SolveOutcome out = solve(cov, b, settings);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return TrialRecord{algorithm, corr.size(), seed, out.converged, elapsed, out.cycles, out.final_gap};
}

/// Generates the seeded arithmetic-spectrum matrix (untimed) and solves it.
inline TrialRecord run_trial(Algorithm algorithm, Index n, std::uint64_t seed, const SolverSettings& settings) {
    riskpar::detail::require(n >= 2, "trial size must be at least 2");
    const auto corr = lab::simulate_correlation(n, seed);
    return run_trial_on(algorithm, corr, seed, settings);
}

inline BenchStats aggregate(const std::vector<TrialRecord>& records) {
    riskpar::detail::require(!records.empty(), "cannot aggregate an empty record list");
    BenchStats s;
    s.algorithm = records.front().algorithm;
    s.n = records.front().n;
    s.trials = records.size();
    std::size_t converged = 0;
    double total = 0.0, total_conv = 0.0;
    for (const auto& r : records) {
        riskpar::detail::require(r.algorithm == s.algorithm && r.n == s.n,
                                 "records must share one (algorithm, n)");
        total += r.elapsed_seconds;
        s.t_max = std::max(s.t_max, r.elapsed_seconds);
        if (r.converged) {
            ++converged;
            total_conv += r.elapsed_seconds;
        }
    }
    s.p_s = 100.0 * double(converged) / double(s.trials);
    s.t_mean = total / double(s.trials);
    if (converged > 0) s.t_mean_converged = total_conv / double(converged);
    return s;
}

struct StudyConfig {
    std::vector<Index> sizes;
    std::size_t trials_per_size = 0;  // 0: 10 trials for n >= 500, 50 below
    std::vector<Algorithm> algorithms{Algorithm::CCD, Algorithm::Newton, Algorithm::Jacobi};
    std::uint64_t seed_base = 1;
    SolverSettings settings{};
    bool parallel = true;
    bool warmup = true;
};

struct StudyResult {
    std::vector<TrialRecord> records;  // ordered by (algorithm, n, seed)
    std::vector<BenchStats> stats;     // one per (algorithm, n), same order
};

inline std::size_t trials_for(Index n, std::size_t requested) {
    if (requested > 0) return requested;
    return n >= 500 ? 10 : 50;
}

inline StudyResult scaling_study(const StudyConfig& config) {
    riskpar::detail::require(!config.sizes.empty(), "scaling study needs at least one size");
    riskpar::detail::require(!config.algorithms.empty(), "scaling study needs at least one algorithm");
    for (Index n : config.sizes) riskpar::detail::require(n >= 2, "all sizes must be at least 2");
    config.settings.validate();

    struct Task {
        Index n;
        std::uint64_t seed;
        std::size_t first_record;
    };
    std::vector<Task> tasks;
    std::size_t record_count = 0;
    for (Index n : config.sizes) {
        for (std::size_t t = 0; t < trials_for(n, config.trials_per_size); ++t) {
            tasks.push_back({n, config.seed_base + t, record_count});
            record_count += config.algorithms.size();
        }
    }

    if (config.warmup) {
        for (Index n : config.sizes) {
            const auto corr = lab::simulate_correlation(n, config.seed_base);
            for (Algorithm a : config.algorithms) (void)run_trial_on(a, corr, config.seed_base, config.settings);
        }
    }

    std::vector<TrialRecord> records(record_count);
    auto run_task = [&](const Task& task) {
        const auto corr = lab::simulate_correlation(task.n, task.seed);
        for (std::size_t k = 0; k < config.algorithms.size(); ++k) {
            records[task.first_record + k] = run_trial_on(config.algorithms[k], corr, task.seed, config.settings);
        }
    };

    const unsigned workers = config.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
    if (workers <= 1 || tasks.size() <= 1) {
        for (const auto& task : tasks) run_task(task);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(workers, tasks.size()); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(tasks[i]);
            });
        }
        for (auto& t : pool) t.join();
    }

    auto algo_rank = [&](Algorithm a) {
        return std::find(config.algorithms.begin(), config.algorithms.end(), a) - config.algorithms.begin();
    };
    auto size_rank = [&](Index n) {
        return std::find(config.sizes.begin(), config.sizes.end(), n) - config.sizes.begin();
    };
    std::stable_sort(records.begin(), records.end(), [&](const TrialRecord& l, const TrialRecord& r) {
        if (algo_rank(l.algorithm) != algo_rank(r.algorithm)) return algo_rank(l.algorithm) < algo_rank(r.algorithm);
        if (size_rank(l.n) != size_rank(r.n)) return size_rank(l.n) < size_rank(r.n);
        return l.seed < r.seed;
    });

    StudyResult result;
    result.records = records;
    for (std::size_t i = 0; i < records.size();) {
        std::size_t j = i;
        while (j < records.size() && records[j].algorithm == records[i].algorithm && records[j].n == records[i].n) ++j;
        result.stats.push_back(aggregate({records.begin() + long(i), records.begin() + long(j)}));
        i = j;
    }
    return result;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    riskpar::detail::require(xs.size() == ys.size() && xs.size() >= 2, "slope fit needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        riskpar::detail::require(xs[i] > 0.0 && ys[i] > 0.0, "slope fit needs positive values");
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    riskpar::detail::require(sxx > 0.0, "slope fit needs distinct x values");
    return sxy / sxx;
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace detail

inline constexpr const char* kStatsHeader =
    "algorithm,n,trials,p_s,t_mean_s,t_mean_cs,t_max_s,t_mean_converged_s";

inline void write_stats_csv(std::ostream& out, const std::vector<BenchStats>& stats) {
    out << kStatsHeader << '\n';
    for (const auto& s : stats) {
        out << to_string(s.algorithm) << ',' << s.n << ',' << s.trials << ',' << detail::fmt("%.2f", s.p_s) << ','
            << detail::fmt("%.9g", s.t_mean) << ',' << detail::fmt("%.4f", 100.0 * s.t_mean) << ','
            << detail::fmt("%.9g", s.t_max) << ','
            << (s.t_mean_converged ? detail::fmt("%.9g", *s.t_mean_converged) : std::string("NA")) << '\n';
    }
}

/// One row per size, one t_mean_s column per algorithm.
inline void write_plot_csv(std::ostream& out, const std::vector<BenchStats>& stats) {
    std::vector<Algorithm> algos;
    std::vector<Index> sizes;
    for (const auto& s : stats) {
        if (std::find(algos.begin(), algos.end(), s.algorithm) == algos.end()) algos.push_back(s.algorithm);
        if (std::find(sizes.begin(), sizes.end(), s.n) == sizes.end()) sizes.push_back(s.n);
    }
    out << 'n';
    for (Algorithm a : algos) out << ',' << to_string(a);
    out << '\n';
    for (Index n : sizes) {
        out << n;
        for (Algorithm a : algos) {
            out << ',';
            for (const auto& s : stats) {
                if (s.algorithm == a && s.n == n) out << detail::fmt("%.9g", s.t_mean);
            }
        }
        out << '\n';
    }
}

/// Sizes down, algorithms across, mean time in hundredths of a second;
/// "NC" where no trial converged. Followed by the full statistics.
inline void print_table(std::ostream& out, const std::vector<BenchStats>& stats) {
    std::vector<Algorithm> algos;
    std::vector<Index> sizes;
    for (const auto& s : stats) {
        if (std::find(algos.begin(), algos.end(), s.algorithm) == algos.end()) algos.push_back(s.algorithm);
        if (std::find(sizes.begin(), sizes.end(), s.n) == sizes.end()) sizes.push_back(s.n);
    }
    out << "Mean solve time (hundredths of a second)\n";
    out << std::setw(8) << "n";
    for (Algorithm a : algos) out << std::setw(12) << to_string(a);
    out << '\n';
    for (Index n : sizes) {
        out << std::setw(8) << n;
        for (Algorithm a : algos) {
            std::string cell = "-";
            for (const auto& s : stats) {
                if (s.algorithm != a || s.n != n) continue;
                cell = s.p_s == 0.0 ? "NC" : detail::fmt("%.2f", 100.0 * s.t_mean);
            }
            out << std::setw(12) << cell;
        }
        out << '\n';
    }
    out << '\n'
        << std::setw(8) << "algo" << std::setw(8) << "n" << std::setw(8) << "trials" << std::setw(10) << "p_s"
        << std::setw(12) << "T_mean(cs)" << std::setw(12) << "T_max(cs)" << '\n';
    for (const auto& s : stats) {
        out << std::setw(8) << to_string(s.algorithm) << std::setw(8) << s.n << std::setw(8) << s.trials
            << std::setw(10) << detail::fmt("%.2f", s.p_s) << std::setw(12) << detail::fmt("%.2f", 100.0 * s.t_mean)
            << std::setw(12) << detail::fmt("%.2f", 100.0 * s.t_max) << '\n';
    }
}

}  // namespace riskpar::bench
