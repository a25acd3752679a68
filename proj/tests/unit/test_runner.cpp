#include "monoper/runner.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace monoper;
namespace fs = std::filesystem;

namespace {

const fs::path kData = MONOPER_TEST_DATA_DIR;

class RunnerTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        out_ = fs::temp_directory_path() / "monoper-tests" / info->name();
        fs::remove_all(out_);
    }

    int run(Verb verb, const std::string& config, const fs::path& dir) {
        log_.str("");
        err_.str("");
        return run_file(verb, kData / config, dir, log_, err_);
    }
    int run(Verb verb, const std::string& config) { return run(verb, config, out_); }

    nlohmann::json report() const {
        std::ifstream in(out_ / "report.json");
        return nlohmann::json::parse(in);
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static std::vector<std::vector<std::string>> csv(const fs::path& p) {
        std::ifstream in(p);
        std::vector<std::vector<std::string>> rows;
        std::string line;
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (!line.empty() && line.back() == ',') cells.emplace_back();
            rows.push_back(cells);
        }
        return rows;
    }

    fs::path out_;
    std::ostringstream log_;
    std::ostringstream err_;
};

}  // namespace

TEST(Verb, NamesRoundTrip) {
    for (const Verb v : {Verb::Solve, Verb::Check, Verb::Certify, Verb::Oracle, Verb::Sweep}) {
        EXPECT_EQ(parse_verb(to_string(v)), v);
    }
    EXPECT_THROW((void)parse_verb("plot"), std::invalid_argument);
}

TEST_F(RunnerTest, ScalarBenchmarkSolves) {
    ASSERT_EQ(run(Verb::Solve, "scalar_benchmark.yaml"), exit_code::ok) << err_.str();
    const auto j = report();
    EXPECT_EQ(j["status"], "unique_solution");
    EXPECT_TRUE(j["certificate"]["certified"].get<bool>());
    EXPECT_TRUE(j["oracle"]["ok"].get<bool>());
    EXPECT_TRUE(j["extremality"]["ok"].get<bool>());
    EXPECT_TRUE(j["hypotheses"]["H1"]["ok"].get<bool>());

    const auto conv = csv(out_ / "convergence.csv");
    ASSERT_GT(conv.size(), 3u);
    EXPECT_EQ(conv[0], (std::vector<std::string>{"step", "gap", "lower_step", "upper_step", "ratio", "kappa"}));
    const double kappa = std::stod(conv[1][5]);
    for (std::size_t i = 2; i < conv.size(); ++i) {
        EXPECT_LE(std::stod(conv[i][4]), kappa + 1e-6) << "row " << i;
    }

    const auto iterates = csv(out_ / "iterates.csv");
    EXPECT_EQ(iterates[0], (std::vector<std::string>{"step", "node", "time", "component", "v", "w"}));
    const int steps = j["iterations"].get<int>() + 1;
    EXPECT_EQ(iterates.size(), 1u + static_cast<std::size_t>(steps) * 256u);

    const auto oracle = csv(out_ / "oracle.csv");
    EXPECT_EQ(oracle.size(), 257u);
    EXPECT_EQ(oracle[0], (std::vector<std::string>{"node", "time", "component", "solver", "oracle", "error"}));
}

TEST_F(RunnerTest, CsvUsesSeventeenSignificantDigits) {
    ASSERT_EQ(run(Verb::Solve, "max_iter.yaml"), exit_code::max_iter_reached);
    const auto rows = csv(out_ / "iterates.csv");
    // time of node 1 = 2 pi / 32
    EXPECT_EQ(rows[2][2], "0.19634954084936207");
}

TEST_F(RunnerTest, Deterministic) {
    const fs::path a = out_ / "a", b = out_ / "b";
    ASSERT_EQ(run(Verb::Solve, "scalar_benchmark.yaml", a), exit_code::ok);
    ASSERT_EQ(run(Verb::Solve, "scalar_benchmark.yaml", b), exit_code::ok);
    for (const char* file : {"iterates.csv", "convergence.csv", "oracle.csv", "report.json"}) {
        EXPECT_EQ(slurp(a / file), slurp(b / file)) << file;
    }
}

TEST_F(RunnerTest, H1RefutedExitsTwoWithWitness) {
    EXPECT_EQ(run(Verb::Solve, "h1_refuted.yaml"), exit_code::refuted);
    const auto j = report();
    EXPECT_EQ(j["status"], "hypothesis_refuted");
    EXPECT_FALSE(j["hypotheses"]["H1"]["ok"].get<bool>());
    EXPECT_TRUE(j["hypotheses"]["H1"].contains("witness"));
    EXPECT_EQ(run(Verb::Check, "h1_refuted.yaml"), exit_code::refuted);
}

TEST_F(RunnerTest, InvalidLowerSolutionExitsTwo) {
    EXPECT_EQ(run(Verb::Solve, "invalid_lower.yaml"), exit_code::refuted);
    EXPECT_NE(err_.str().find("invalid lower solution"), std::string::npos) << err_.str();
    EXPECT_EQ(report()["status"], "invalid_bracket");
}

TEST_F(RunnerTest, MonotonicityViolationExitsThree) {
    EXPECT_EQ(run(Verb::Solve, "monotonicity.yaml"), exit_code::monotonicity_violated);
    const auto j = report();
    EXPECT_EQ(j["status"], "monotonicity_violated");
    EXPECT_EQ(j["violation"]["step"], 1);
}

TEST_F(RunnerTest, MaxIterExitsFour) {
    EXPECT_EQ(run(Verb::Solve, "max_iter.yaml"), exit_code::max_iter_reached);
    EXPECT_EQ(report()["iterations"], 2);
}

TEST_F(RunnerTest, UnknownKeyExitsOne) {
    EXPECT_EQ(run(Verb::Solve, "unknown_key.yaml"), exit_code::config_error);
    EXPECT_NE(err_.str().find("unknown_key.yaml:10"), std::string::npos) << err_.str();
    EXPECT_NE(err_.str().find("L3"), std::string::npos);
    EXPECT_FALSE(fs::exists(out_ / "report.json"));
}

TEST_F(RunnerTest, MissingConfigExitsOne) {
    EXPECT_EQ(run(Verb::Solve, "does_not_exist.yaml"), exit_code::config_error);
}

TEST_F(RunnerTest, CertificateMissingConstantsExitsOne) {
    EXPECT_EQ(run(Verb::Certify, "max_iter.yaml"), exit_code::config_error);
    EXPECT_NE(err_.str().find("L1"), std::string::npos) << err_.str();
}

TEST_F(RunnerTest, CertifyVerb) {
    EXPECT_EQ(run(Verb::Certify, "scalar_benchmark.yaml"), exit_code::ok);
    EXPECT_NEAR(report()["certificate"]["kappa"].get<double>(), 0.314, 1e-3);
    EXPECT_FALSE(fs::exists(out_ / "iterates.csv"));
    EXPECT_EQ(run(Verb::Certify, "not_certified.yaml"), exit_code::refuted);
    EXPECT_FALSE(report()["certificate"]["certified"].get<bool>());
}

TEST_F(RunnerTest, CheckVerbPasses) {
    EXPECT_EQ(run(Verb::Check, "scalar_benchmark.yaml"), exit_code::ok);
    const auto j = report();
    EXPECT_EQ(j["status"], "not_refuted");
    EXPECT_TRUE(j["hypotheses"].contains("H5"));
}

TEST_F(RunnerTest, OracleVerbReportsCoarseGridFailure) {
    EXPECT_EQ(run(Verb::Oracle, "coarse_oracle.yaml"), exit_code::refuted);
    const auto j = report();
    EXPECT_EQ(j["oracle"]["kind"], "fourier");
    EXPECT_GT(j["oracle"]["max_error"].get<double>(), 1e-3);
    EXPECT_TRUE(fs::exists(out_ / "oracle.csv"));
}

TEST_F(RunnerTest, OracleVerbTimestep) {
    EXPECT_EQ(run(Verb::Oracle, "parabolic_timestep.yaml"), exit_code::ok) << err_.str();
    EXPECT_EQ(report()["oracle"]["kind"], "timestep");
}

TEST_F(RunnerTest, SweepShowsSecondOrder) {
    ASSERT_EQ(run(Verb::Sweep, "coarse_oracle.yaml"), exit_code::ok) << err_.str();
    const auto rows = csv(out_ / "sweep.csv");
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"nodes", "status", "iterations", "oracle", "max_error",
                                                 "observed_order"}));
    const double e32 = std::stod(rows[1][4]), e256 = std::stod(rows[4][4]);
    EXPECT_NEAR(e32 / e256, 64.0, 3.0);
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][5]), 2.0, 0.05);
}

TEST_F(RunnerTest, SweepIsIndependentOfJobCount) {
    RunConfig c = load_config(kData / "coarse_oracle.yaml");
    std::ostringstream log, err;
    c.output_directory = out_ / "serial";
    c.grid.jobs = 1;
    ASSERT_EQ(monoper::run(Verb::Sweep, c, log, err), exit_code::ok);
    c.output_directory = out_ / "parallel";
    c.grid.jobs = 4;
    ASSERT_EQ(monoper::run(Verb::Sweep, c, log, err), exit_code::ok);
    EXPECT_EQ(slurp(out_ / "serial" / "sweep.csv"), slurp(out_ / "parallel" / "sweep.csv"));
}

namespace {

int run_binary(const std::string& args) {
    const std::string cmd = std::string(MONOPER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(RunnerTest, BinaryExitCodes) {
    const std::string out = " -o " + out_.string();
    EXPECT_EQ(run_binary("solve " + (kData / "scalar_benchmark.yaml").string() + out), 0);
    EXPECT_EQ(run_binary("solve " + (kData / "h1_refuted.yaml").string() + out), 2);
    EXPECT_EQ(run_binary("solve " + (kData / "invalid_lower.yaml").string() + out), 2);
    EXPECT_EQ(run_binary("solve " + (kData / "monotonicity.yaml").string() + out), 3);
    EXPECT_EQ(run_binary("solve " + (kData / "max_iter.yaml").string() + out), 4);
    EXPECT_EQ(run_binary("solve " + (kData / "unknown_key.yaml").string() + out), 1);
    EXPECT_EQ(run_binary("frobnicate"), 1);
    EXPECT_EQ(run_binary("solve"), 1);
    EXPECT_EQ(run_binary("--help"), 0);
}

TEST_F(RunnerTest, BinaryHonoursOutputEnvironmentVariable) {
    const std::string cmd = "MONOPER_OUTPUT_DIR=" + out_.string() + " " + MONOPER_CLI_PATH + " check -q " +
                            (kData / "scalar_benchmark.yaml").string() + " >/dev/null 2>&1";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(out_ / "report.json"));
}
