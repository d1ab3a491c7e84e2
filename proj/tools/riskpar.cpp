#include "riskpar/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace riskpar::cli;

    CLI::App app{"Risk budgeting portfolios: solve, generate test matrices, benchmark solvers"};
    app.require_subcommand(1);

    SolveRequest solve;
    std::string matrix_kind;
    auto* solve_cmd = app.add_subcommand("solve", "Compute a risk budgeting portfolio");
    solve_cmd->add_option("--matrix", solve.matrix_path, "Square matrix CSV (no header)")->required();
    solve_cmd->add_option("--matrix-kind", matrix_kind, "How to read --matrix: corr or cov")
        ->required()
        ->check(CLI::IsMember({"corr", "cov"}));
    solve_cmd->add_option("--vols", solve.vols_path, "Volatility vector CSV (required with corr)");
    solve_cmd->add_option("--budgets", solve.budgets_path, "Risk budget vector CSV (default: uniform)");
    solve_cmd->add_option("--algo", solve.algorithm, "ccd, newton or jacobi")->capture_default_str();
    solve_cmd->add_option("--mu", solve.mu_path, "Expected return vector CSV (standard-deviation-based measure)");
    solve_cmd->add_option("--c", solve.c, "Volatility multiplier of the standard-deviation-based measure");
    solve_cmd->add_option("--tol", solve.tolerance, "Convergence tolerance on risk contributions")
        ->capture_default_str();
    solve_cmd->add_option("--max-cycles", solve.max_cycles, "Cycle / iteration budget")->capture_default_str();
    solve_cmd->add_option("--output", solve.output_path, "JSON report path (default: stdout)");

    GenRequest gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a random correlation matrix with an arithmetic spectrum");
    gen_cmd->add_option("--n", gen.n, "Matrix size")->required();
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out_path, "Output CSV path")->required();

    BenchRequest bench;
    std::string algos = "ccd,newton,jacobi";
    auto* bench_cmd = app.add_subcommand("bench", "Compare solvers on simulated correlation matrices");
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated sizes")->required()->delimiter(',');
    bench_cmd->add_option("--trials", bench.trials, "Trials per size (default: 10 for n >= 500, else 50)");
    bench_cmd->add_option("--algos", algos, "Comma-separated algorithms")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "First seed")->capture_default_str();
    bench_cmd->add_option("--out", bench.out_path, "Statistics CSV path")->required();
    bench_cmd->add_option("--plot", bench.plot_path, "Plot series CSV path (default: <out>_plot.csv)");
    bench_cmd->add_flag("--no-parallel", bench.no_parallel, "Run trials sequentially");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    if (*solve_cmd) {
        solve.matrix_kind = matrix_kind == "cov" ? MatrixKind::Covariance : MatrixKind::Correlation;
        return cmd_solve(solve, std::cout, std::cerr);
    }
    if (*gen_cmd) return cmd_gen(gen, std::cout, std::cerr);

    bench.algorithms.clear();
    std::string_view rest(algos);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        bench.algorithms.emplace_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return cmd_bench(bench, std::cout, std::cerr);
}
