#include "riskpar/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace riskpar;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("riskpar_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = (dir_ / name).string();
        std::ofstream(p) << text;
        return p;
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
    std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, SolveTwoAssetCorrelation) {
    cli::SolveRequest req;
    req.matrix_path = write("c.csv", "1,0.5\n0.5,1\n");
    req.vols_path = write("v.csv", "0.1\n0.2\n");
    ASSERT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitOk) << err_.str();
    const auto j = nlohmann::json::parse(out_.str());
    EXPECT_EQ(j["algorithm"], "ccd");
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_NEAR(j["weights"][0].get<double>(), 2.0 / 3.0, 1e-8);
    EXPECT_NEAR(j["risk_contributions"][1].get<double>(), 0.5, 1e-8);
    EXPECT_LE(j["final_gap"].get<double>(), 1e-8);
}

TEST_F(CliTest, SolveCovarianceAllAlgorithmsToFile) {
    const auto m = write("s.csv", "0.01,0.01,0.015\n0.01,0.04,0.03\n0.015,0.03,0.09\n");
    const auto b = write("b.csv", "0.5\n0.3\n0.2\n");
    for (const char* algo : {"ccd", "newton", "jacobi"}) {
        cli::SolveRequest req;
        req.matrix_path = m;
        req.matrix_kind = cli::MatrixKind::Covariance;
        req.budgets_path = b;
        req.algorithm = algo;
        req.output_path = path(std::string(algo) + ".json");
        ASSERT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitOk) << algo << ": " << err_.str();
        std::ifstream f(*req.output_path);
        const auto j = nlohmann::json::parse(f);
        EXPECT_EQ(j["algorithm"], algo);
        EXPECT_NEAR(j["weights"][0].get<double>(), 0.66896822857562499, 1e-7) << algo;
    }
    EXPECT_TRUE(out_.str().empty());
}

TEST_F(CliTest, SolveStddevMeasure) {
    cli::SolveRequest req;
    req.matrix_path = write("c.csv", "1,0\n0,1\n");
    req.vols_path = write("v.csv", "0.1\n0.2\n");
    req.mu_path = write("mu.csv", "0.05\n0.10\n");
    req.c = 2.0;
    ASSERT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitOk) << err_.str();
    const auto j = nlohmann::json::parse(out_.str());
    EXPECT_GT(j["weights"][0].get<double>(), 0.0);
}

TEST_F(CliTest, SolveInputErrors) {
    cli::SolveRequest req;
    req.matrix_path = write("c.csv", "1,0.5\n0.5,1\n");
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitInputError);  // vols missing

    req.vols_path = write("v.csv", "0.1\n0.2\n");
    req.algorithm = "simplex";
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitInputError);
    EXPECT_NE(err_.str().find("ccd, newton, jacobi"), std::string::npos);

    req.algorithm = "ccd";
    req.matrix_path = write("np.csv", "1,0.9,0.9\n0.9,1,-0.9\n0.9,-0.9,1\n");
    req.vols_path = write("v3.csv", "0.1\n0.2\n0.3\n");
    err_.str("");
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitInputError);
    EXPECT_NE(err_.str().find("pivot 2"), std::string::npos) << err_.str();

    req.matrix_path = write("bad.csv", "1,x\nx,1\n");
    req.vols_path = write("v.csv", "0.1\n0.2\n");
    err_.str("");
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitInputError);
    EXPECT_NE(err_.str().find("row"), std::string::npos) << err_.str();

    req.matrix_path = write("c.csv", "1,0.5\n0.5,1\n");
    req.budgets_path = write("b.csv", "0.5\n0.3\n0.2\n");
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitInputError);

    req.budgets_path.reset();
    req.mu_path = write("mu.csv", "0.05\n0.1\n");
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitInputError);  // --c missing
}

TEST_F(CliTest, SolveNotConvergedExitCode) {
    cli::SolveRequest req;
    req.matrix_path = write("c.csv", "1,0.5,0.5\n0.5,1,0.5\n0.5,0.5,1\n");
    req.vols_path = write("v.csv", "0.1\n0.2\n0.3\n");
    req.max_cycles = 1;
    req.tolerance = 1e-14;
    EXPECT_EQ(cli::cmd_solve(req, out_, err_), cli::kExitNotConverged);
    EXPECT_FALSE(nlohmann::json::parse(out_.str())["converged"].get<bool>());
}

TEST_F(CliTest, GenWritesReadableMatrix) {
    cli::GenRequest req;
    req.n = 6;
    req.seed = 4;
    req.out_path = path("g.csv");
    ASSERT_EQ(cli::cmd_gen(req, out_, err_), cli::kExitOk) << err_.str();
    const Matrix m = io::read_matrix_csv(req.out_path);
    EXPECT_EQ(m, lab::simulate_correlation(6, 4).matrix());
    EXPECT_NE(out_.str().find("min_eigenvalue=0.28571428"), std::string::npos) << out_.str();
    EXPECT_NE(out_.str().find("condition_number="), std::string::npos) << out_.str();

    req.n = 1;
    EXPECT_EQ(cli::cmd_gen(req, out_, err_), cli::kExitInputError);
}

TEST_F(CliTest, BenchWritesCsvs) {
    cli::BenchRequest req;
    req.sizes = {5, 8};
    req.trials = 2;
    req.out_path = path("stats.csv");
    ASSERT_EQ(cli::cmd_bench(req, out_, err_), cli::kExitOk) << err_.str();
    std::ifstream stats(req.out_path);
    std::string header;
    std::getline(stats, header);
    EXPECT_EQ(header, bench::kStatsHeader);
    std::ifstream plot(path("stats_plot.csv"));
    std::getline(plot, header);
    EXPECT_EQ(header, "n,ccd,newton,jacobi");

    req.algorithms = {"ccd", "bogus"};
    EXPECT_EQ(cli::cmd_bench(req, out_, err_), cli::kExitInputError);
}

TEST(DefaultPlotPath, Variants) {
    EXPECT_EQ(cli::default_plot_path("out/stats.csv"), "out/stats_plot.csv");
    EXPECT_EQ(cli::default_plot_path("stats"), "stats_plot.csv");
    EXPECT_EQ(cli::default_plot_path("a.b/stats"), "a.b/stats_plot.csv");
}
