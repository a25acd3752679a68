#include "monoper/run_config.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace monoper;

namespace {

constexpr const char* kMinimal = R"(problem:
  kind: scalar_delay
  period: 2*pi
)";

ConfigError parse_error(const std::string& text) {
    try {
        (void)parse_config(text, "test.yaml");
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "expected ConfigError for:\n" << text;
    return ConfigError("", -1, "");
}

}  // namespace

TEST(ParseRealExpression, NumbersAndPi) {
    EXPECT_DOUBLE_EQ(parse_real_expression("1.5"), 1.5);
    EXPECT_DOUBLE_EQ(parse_real_expression("1e-8"), 1e-8);
    EXPECT_DOUBLE_EQ(parse_real_expression("-3"), -3.0);
    EXPECT_EQ(parse_real_expression("2*pi"), 2 * std::numbers::pi);
    EXPECT_EQ(parse_real_expression("pi / 2"), std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(parse_real_expression("(1 + 2) * 3 - 4 / 8"), 8.5);
    EXPECT_DOUBLE_EQ(parse_real_expression("-(pi - pi)"), 0.0);
}

TEST(ParseRealExpression, Malformed) {
    for (const char* bad : {"", "pie", "2*", "(1", "1 2", "abc", "1..2"}) {
        EXPECT_THROW((void)parse_real_expression(bad), std::invalid_argument) << bad;
    }
}

TEST(ParseConfig, MinimalDefaults) {
    const RunConfig c = parse_config(kMinimal);
    EXPECT_EQ(c.problem.kind, ProblemKind::ScalarDelay);
    EXPECT_EQ(c.problem.period, 2 * std::numbers::pi);
    EXPECT_EQ(c.grid.nodes, 64);
    EXPECT_EQ(c.problem.time_nodes, 64);
    EXPECT_EQ(c.grid.tolerance, 1e-8);
    EXPECT_EQ(c.grid.max_iter, 500);
    EXPECT_EQ(c.grid.quadrature, Quadrature::ExponentialTrapezoid);
    EXPECT_TRUE(c.checks.h1);
    EXPECT_TRUE(c.checks.h3h4h5);
    EXPECT_FALSE(c.checks.certificate);
    EXPECT_EQ(c.grid.sweep_levels, (std::vector<Eigen::Index>{16, 32, 64}));
}

TEST(ParseConfig, FullConfig) {
    const RunConfig c = parse_config(R"(
problem:
  kind: parabolic_1d
  spatial_nodes: 50
  period: 2*pi
  delay: 1
  coefficient: 0.5
  source: 1
  forcing: 0.25
  profile: sine
  state: -1
  delayed: 0.5
  state_quadratic: -0.1
  delayed_quadratic: 0
  lower: 0
  upper_scale: 4
  upper_shape: torsion
grid:
  nodes: 128
  tolerance: 1e-9
  max_iter: 100
  quadrature: trapezoid
  sweep_levels: [32, 64]
  jobs: 2
constants:
  C: 1
  C1: 0.1
  C2: 1
  C3: 0.5
  L1: 0.2
  L2: 0.5
  N: 1
  shift_margin: 0.3
checks:
  list: [certificate, oracle]
  seed: 7
  samples: 10
  probes: 2
  oracle: timestep
  oracle_bound: 1e-4
  oracle_periods: 20
  oracle_substeps: 5
output:
  directory: results/run1
)");
    EXPECT_EQ(c.problem.kind, ProblemKind::Parabolic1d);
    EXPECT_EQ(c.problem.spatial_nodes, 50);
    EXPECT_EQ(c.problem.time_nodes, 128);
    EXPECT_EQ(c.problem.coefficient, 0.5);
    EXPECT_EQ(c.problem.reaction.profile, ForcingProfile::Sine);
    EXPECT_EQ(c.problem.reaction.state_quadratic, -0.1);
    EXPECT_EQ(*c.problem.upper_shape, UpperShape::Torsion);
    EXPECT_EQ(*c.problem.upper_scale, 4.0);
    EXPECT_EQ(c.grid.quadrature, Quadrature::Trapezoid);
    EXPECT_EQ(c.grid.sweep_levels, (std::vector<Eigen::Index>{32, 64}));
    EXPECT_EQ(c.grid.jobs, 2);
    EXPECT_EQ(*c.problem.constants.C3, 0.5);
    EXPECT_EQ(*c.shift_margin, 0.3);
    EXPECT_FALSE(c.checks.h1);
    EXPECT_TRUE(c.checks.certificate);
    EXPECT_TRUE(c.checks.oracle);
    EXPECT_EQ(c.checks.seed, 7u);
    EXPECT_EQ(c.checks.oracle_kind, OracleKind::Timestep);
    EXPECT_EQ(c.checks.oracle_periods, 20);
    EXPECT_EQ(c.output_directory, "results/run1");
}

TEST(ParseConfig, UnknownKeyNamesLineAndKey) {
    const ConfigError e = parse_error(std::string(kMinimal) + "constants:\n  C: 0\n  L3: 1\n");
    EXPECT_EQ(e.line(), 6);
    EXPECT_EQ(e.key(), "L3");
    EXPECT_NE(std::string(e.what()).find("test.yaml:6"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos);
}

TEST(ParseConfig, UnknownSection) {
    const ConfigError e = parse_error(std::string(kMinimal) + "solver:\n  nodes: 3\n");
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.key(), "solver");
}

TEST(ParseConfig, DuplicateKey) {
    const ConfigError e = parse_error("problem:\n  kind: scalar_delay\n  period: 1\n  period: 2\n");
    EXPECT_EQ(e.key(), "period");
    EXPECT_EQ(e.line(), 4);
}

TEST(ParseConfig, MissingRequired) {
    EXPECT_EQ(parse_error("problem:\n  period: 1\n").key(), "kind");
    EXPECT_EQ(parse_error("problem:\n  kind: scalar_delay\n").key(), "period");
    EXPECT_EQ(parse_error("grid:\n  nodes: 4\n").key(), "problem");
}

TEST(ParseConfig, WrongTypesAndValues) {
    EXPECT_EQ(parse_error(std::string(kMinimal) + "grid:\n  nodes: 2.5\n").key(), "nodes");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "grid:\n  nodes: 1\n").key(), "nodes");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "grid:\n  tolerance: 0\n").key(), "tolerance");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "grid:\n  max_iter: 0\n").key(), "max_iter");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "grid:\n  quadrature: simpson\n").key(), "quadrature");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "grid:\n  sweep_levels: 4\n").key(), "sweep_levels");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "checks:\n  list: [h1, h2]\n").key(), "list");
    EXPECT_EQ(parse_error(std::string(kMinimal) + "checks:\n  oracle_bound: -1\n").key(), "oracle_bound");
    EXPECT_EQ(parse_error("problem:\n  kind: elliptic\n  period: 1\n").key(), "kind");
    EXPECT_EQ(parse_error("problem:\n  kind: scalar_delay\n  period: two\n").key(), "period");
    EXPECT_EQ(parse_error("problem:\n  kind: scalar_delay\n  period: -1\n").key(), "period");
    EXPECT_EQ(parse_error("problem:\n  kind: scalar_delay\n  period: 1\n  delay: [1]\n").key(), "delay");
}

TEST(ParseConfig, NegativeConstantRejected) {
    const ConfigError e = parse_error(std::string(kMinimal) + "constants:\n  L2: -0.5\n");
    EXPECT_NE(std::string(e.what()).find("L2"), std::string::npos);
}

TEST(ParseConfig, YamlSyntaxErrorHasLine) {
    const ConfigError e = parse_error("problem:\n  kind: [scalar_delay\n  period: 1\n");
    EXPECT_GT(e.line(), 0);
}

TEST(ParseConfig, EmptyListDisablesChecks) {
    const RunConfig c = parse_config(std::string(kMinimal) + "checks:\n  list: []\n");
    EXPECT_FALSE(c.checks.h1);
    EXPECT_FALSE(c.checks.h3h4h5);
}

TEST(LoadConfig, MissingFile) {
    EXPECT_THROW((void)load_config("/nonexistent/config.yaml"), ConfigError);
}
